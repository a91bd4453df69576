#include "tflis/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tflis/flis.hpp"
#include "tflis/oracles.hpp"
#include "tflis/sdu.hpp"
#include "tflis/simulate.hpp"
#include "tflis/tflis.hpp"

namespace tflis {

namespace {

double stats_rel_err(const GaussianStats& got, const GaussianStats& ref) {
  const double mean_err =
      (got.mean - ref.mean).norm() / std::max(ref.mean.norm(), 1e-9);
  const double cov_err =
      (got.cov - ref.cov).norm() / std::max(ref.cov.norm(), 1e-9);
  return std::max(mean_err, cov_err);
}

std::string format_err(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult check_sdu_batch_equivalence() {
  CheckResult res{"sdu-batch-equivalence", false, ""};
  RandomStream rng(0x5D11C0DEULL);
  double worst = 0.0;
  const int instances = 200;
  for (int t = 0; t < instances; ++t) {
    const int n = 1 + static_cast<int>(rng.uniform() * 8.0);
    const int m = 1 + static_cast<int>(rng.uniform() * 4.0);

    // Prior covariance with log-uniform spectrum, condition number <= 1e6.
    Matrix basis(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        basis(i, j) = rng.normal();
      }
    }
    const Matrix orth =
        Eigen::HouseholderQR<Matrix>(basis).householderQ() * Matrix::Identity(n, n);
    Vector eigs(n);
    for (int i = 0; i < n; ++i) {
      eigs(i) = std::pow(10.0, -3.0 + 6.0 * rng.uniform());
    }
    GaussianStats prior;
    prior.cov = symmetrized(orth * eigs.asDiagonal() * orth.transpose());
    prior.mean = Vector(n);
    for (int i = 0; i < n; ++i) {
      prior.mean(i) = rng.normal();
    }

    Matrix h(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        h(i, j) = rng.normal();
      }
    }
    Vector gamma(m), z(m);
    for (int i = 0; i < m; ++i) {
      gamma(i) = std::pow(10.0, -2.0 + 4.0 * rng.uniform());
      z(i) = 3.0 * rng.normal();
    }

    const GaussianStats seq = sequential_data_update(prior, h, gamma, z);
    const GaussianStats batch = batch_posterior(prior, h, gamma, z);
    worst = std::max(worst, stats_rel_err(seq, batch));
  }
  res.pass = worst <= 1e-9;
  res.detail = "max relative error " + format_err(worst) + " over 200 instances";
  return res;
}

CheckResult check_window_joint_oracle() {
  CheckResult res{"window-joint-oracle", false, ""};
  const StateSpaceModel model = tracking_model();
  const GaussianStats prior = vague_tracking_prior();
  const int lag = 2;
  const int horizon = 6;
  const SimulatedRun sim = simulate_run(model, 1e-3, 0x5EEDULL, 0, horizon);

  Flis smoother(model, prior, lag);
  double worst = 0.0;
  std::vector<Vector> inputs;
  std::vector<BatchObservation> observations;
  for (int k = 1; k <= horizon; ++k) {
    observations.push_back({k, model.C, model.observation_variances(),
                            sim.y_target[static_cast<std::size_t>(k - 1)]});
    smoother.data_step(sim.y_target[static_cast<std::size_t>(k - 1)]);
    const GaussianStats batch = batch_window_posterior(
        model, prior, inputs, observations, smoother.window_size());
    worst = std::max(worst, stats_rel_err(smoother.belief(), batch));
    smoother.time_step(sim.inputs[static_cast<std::size_t>(k - 1)]);
    inputs.push_back(sim.inputs[static_cast<std::size_t>(k - 1)]);
  }
  res.pass = worst <= 1e-8;
  res.detail = "max relative error " + format_err(worst) + " over 6 steps";
  return res;
}

CheckResult check_kalman_degeneration() {
  CheckResult res{"kalman-degeneration", false, ""};
  const StateSpaceModel model = tracking_model();
  const GaussianStats prior = vague_tracking_prior();
  const int horizon = 50;
  const SimulatedRun sim = simulate_run(model, 1e-3, 0xF17E8ULL, 0, horizon);

  ReferenceKalmanFilter ref(model, prior);
  Tflis transfer_off(model, prior,
                     WishartStats(Vector::Zero(model.output_dim()), 0.0), 0, 0);
  Flis plain(model, prior, 0);
  Flis window(model, prior, 2);

  double worst_transfer = 0.0, worst_plain = 0.0, worst_marginal = 0.0;
  for (int k = 1; k <= horizon; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    ref.update(sim.y_target[i]);

    const Tflis::StepResult step =
        transfer_off.step(sim.inputs[i], sim.y_target[i], sim.y_external[i]);
    worst_transfer =
        std::max(worst_transfer, stats_rel_err(step.reported, ref.belief()));

    plain.data_step(sim.y_target[i]);
    worst_plain =
        std::max(worst_plain, stats_rel_err(plain.belief(), ref.belief()));
    plain.time_step(sim.inputs[i]);

    window.data_step(sim.y_target[i]);
    GaussianStats marginal;
    marginal.mean = window.belief().mean.head(model.state_dim());
    marginal.cov = window.belief().cov.topLeftCorner(model.state_dim(),
                                                     model.state_dim());
    worst_marginal =
        std::max(worst_marginal, stats_rel_err(marginal, ref.belief()));
    window.time_step(sim.inputs[i]);

    ref.predict(sim.inputs[i]);
  }
  const double worst =
      std::max({worst_transfer, worst_plain, worst_marginal});
  res.pass = worst <= 1e-10;
  res.detail = "transfer-off " + format_err(worst_transfer) + ", lag-0 " +
               format_err(worst_plain) + ", window marginal " +
               format_err(worst_marginal);
  return res;
}

CheckResult check_prbs_period() {
  CheckResult res{"prbs-period", false, ""};
  for (unsigned seed = 1; seed <= 15; ++seed) {
    PrbsGenerator gen(seed);
    int plus = 0;
    bool states_ok = true;
    unsigned visited_mask = 0;
    for (int i = 0; i < 15; ++i) {
      const unsigned s = gen.state();
      if (s == 0 || s > 15 || (visited_mask & (1u << s))) {
        states_ok = false;
      }
      visited_mask |= 1u << s;
      if (gen.next() > 0) {
        ++plus;
      }
      if (i < 14 && gen.state() == seed) {
        states_ok = false;  // returned early: period below 15
      }
    }
    if (!states_ok || gen.state() != seed || plus != 8) {
      res.detail = "seed " + std::to_string(seed) + " failed";
      return res;
    }
  }
  res.pass = true;
  res.detail = "period 15, all states visited, 8/7 balance for every seed";
  return res;
}

CheckResult check_scale_bookkeeping() {
  CheckResult res{"scale-bookkeeping", false, ""};
  const StateSpaceModel model = tracking_model();
  const int lag = 2;
  const int sweeps = 10;
  const int horizon = 50;
  const double nu0 = 0.0;
  const SimulatedRun sim = simulate_run(model, 1e-3, 0xB00CULL, 0, horizon);

  Tflis transfer(model, vague_tracking_prior(),
                 WishartStats(Vector::Zero(model.output_dim()), nu0), lag,
                 sweeps);
  Vector prev_sigma = Vector::Zero(model.output_dim());
  for (int k = 1; k <= horizon; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    const int w = transfer.window_size();
    Tflis::StepDiagnostics diag;
    const Tflis::StepResult step =
        transfer.step(sim.inputs[i], sim.y_target[i], sim.y_external[i], &diag);

    const double expected_base = nu0 + std::max(k - 1 - lag, 0);
    if (diag.xi_divisor != expected_base + w) {
      res.detail = "scale-mean divisor wrong at step " + std::to_string(k);
      return res;
    }
    const double expected_nu = nu0 + std::max(k - lag, 0);
    if (step.committed_scale.nu != expected_nu) {
      res.detail = "degrees of freedom wrong at step " + std::to_string(k);
      return res;
    }
    for (const auto& chain : diag.sigma_chains) {
      const Vector* last = &prev_sigma;
      for (const Vector& sigma : chain) {
        if (((sigma - *last).array() < -1e-300).any()) {
          res.detail = "scale accumulation not monotone at step " +
                       std::to_string(k);
          return res;
        }
        last = &sigma;
      }
    }
    if (((step.committed_scale.sigma - prev_sigma).array() < 0.0).any()) {
      res.detail = "committed scale shrank at step " + std::to_string(k);
      return res;
    }
    const double divisor = expected_base + w;
    if (!diag.sigma_chains.empty() &&
        (step.xi_bar * divisor - diag.sigma_chains.back().back())
                .cwiseAbs()
                .maxCoeff() > 1e-12 * (1.0 + diag.sigma_chains.back().back().maxCoeff())) {
      res.detail = "scale mean does not match its accumulation at step " +
                   std::to_string(k);
      return res;
    }
    std::string why;
    if (!is_valid_covariance(step.reported.cov, 1e-9, &why) ||
        !is_valid_covariance(step.predicted.cov, 1e-9, &why)) {
      res.detail = "covariance invalid at step " + std::to_string(k) + ": " + why;
      return res;
    }
    prev_sigma = step.committed_scale.sigma;
  }
  res.pass = true;
  res.detail = "identities hold over 50 steps";
  return res;
}

}  // namespace

StateSpaceModel tracking_model() {
  Matrix a(2, 2), b(2, 1), c(2, 2), q(2, 2), r(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;
  b << 0.5, 1.0;
  c << 1.0, 0.0, 0.0, 1.0;
  q << 0.25e-4, 0.5e-4, 0.5e-4, 1.0e-4;
  r << 1e-3, 0.0, 0.0, 1e-3;
  return StateSpaceModel(a, b, c, q, r);
}

GaussianStats vague_tracking_prior() {
  GaussianStats prior;
  prior.mean = Vector::Zero(2);
  prior.cov = 1e7 * Matrix::Identity(2, 2);
  return prior;
}

std::vector<CheckResult> run_verification_suite() {
  return {check_sdu_batch_equivalence(), check_window_joint_oracle(),
          check_kalman_degeneration(), check_prbs_period(),
          check_scale_bookkeeping()};
}

}  // namespace tflis
