#include "tflis/flis.hpp"

#include <stdexcept>

#include "doctest.h"
#include "tflis/metrics.hpp"
#include "tflis/oracles.hpp"
#include "tflis/simulate.hpp"
#include "tflis/verify.hpp"

using namespace tflis;

namespace {

StateSpaceModel scalar_model(double a, double b, double q, double r) {
  Matrix ma(1, 1), mb(1, 1), mc(1, 1), mq(1, 1), mr(1, 1);
  ma << a;
  mb << b;
  mc << 1.0;
  mq << q;
  mr << r;
  return StateSpaceModel(ma, mb, mc, mq, mr);
}

GaussianStats scalar_stats(double mean, double var) {
  GaussianStats s;
  s.mean = Vector::Constant(1, mean);
  s.cov = Matrix::Constant(1, 1, var);
  return s;
}

}  // namespace

TEST_CASE("initial state covers exactly one block") {
  const StateSpaceModel m = tracking_model();
  Flis s(m, vague_tracking_prior(), 2);
  CHECK(s.time() == 1);
  CHECK(s.window_size() == 1);
  CHECK(s.belief().dim() == 2);
}

TEST_CASE("window grows to lag+1 blocks and then saturates") {
  const StateSpaceModel m = tracking_model();
  const SimulatedRun sim = simulate_run(m, 1e-3, 1, 0, 6);
  Flis s(m, vague_tracking_prior(), 2);
  const int expected_dims[] = {2, 4, 6, 6, 6, 6};
  for (int k = 1; k <= 6; ++k) {
    CHECK(s.belief().dim() == expected_dims[k - 1]);
    CHECK(s.window_size() == expected_dims[k - 1] / 2);
    s.data_step(sim.y_target[k - 1]);
    s.time_step(sim.inputs[k - 1]);
  }
  CHECK(s.time() == 7);
}

TEST_CASE("scalar time step is the one-step prediction") {
  // lag 0, x' = x + u with unit input gain: mean shifts by u, variance
  // picks up the process noise.
  Flis s(scalar_model(1.0, 1.0, 0.04, 1.0), scalar_stats(0.3, 0.7), 0);
  s.time_step(Vector::Constant(1, 1.0));
  CHECK(s.belief().mean(0) == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(s.belief().cov(0, 0) == doctest::Approx(0.74).epsilon(1e-14));
  CHECK(s.time() == 2);
}

TEST_CASE("vague prior snaps to the first observation") {
  const StateSpaceModel m = tracking_model();
  Flis s(m, vague_tracking_prior(), 2);
  Vector y(2);
  y << 0.03, -0.01;
  s.data_step(y);
  CHECK((s.belief().mean - y).norm() <= 1e-9 * y.norm());
  // Posterior variance is essentially the observation noise.
  CHECK(s.belief().cov(0, 0) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(s.belief().cov(1, 1) == doctest::Approx(1e-3).epsilon(1e-9));
}

TEST_CASE("lag-0 smoother reproduces a conventional Kalman filter") {
  const StateSpaceModel m = tracking_model();
  const SimulatedRun sim = simulate_run(m, 1e-3, 21, 0, 50);
  Flis s(m, vague_tracking_prior(), 0);
  ReferenceKalmanFilter ref(m, vague_tracking_prior());
  for (int k = 0; k < 50; ++k) {
    s.data_step(sim.y_target[k]);
    ref.update(sim.y_target[k]);
    CHECK((s.belief().mean - ref.belief().mean).norm() <=
          1e-10 * ref.belief().mean.norm());
    CHECK((s.belief().cov - ref.belief().cov).norm() <=
          1e-10 * ref.belief().cov.norm());
    s.time_step(sim.inputs[k]);
    ref.predict(sim.inputs[k]);
  }
}

TEST_CASE("newest-block marginal of a lagged window matches the filter") {
  const StateSpaceModel m = tracking_model();
  const SimulatedRun sim = simulate_run(m, 1e-3, 33, 0, 30);
  Flis window(m, vague_tracking_prior(), 2);
  ReferenceKalmanFilter ref(m, vague_tracking_prior());
  for (int k = 0; k < 30; ++k) {
    window.data_step(sim.y_target[k]);
    ref.update(sim.y_target[k]);
    CHECK((window.belief().mean.head(2) - ref.belief().mean).norm() <=
          1e-10 * ref.belief().mean.norm());
    CHECK((window.belief().cov.topLeftCorner(2, 2) - ref.belief().cov).norm() <=
          1e-10 * ref.belief().cov.norm());
    window.time_step(sim.inputs[k]);
    ref.predict(sim.inputs[k]);
  }
}

TEST_CASE("window joint belief matches the batch solve") {
  const StateSpaceModel m = tracking_model();
  const GaussianStats prior = vague_tracking_prior();
  const SimulatedRun sim = simulate_run(m, 1e-3, 77, 0, 6);
  Flis s(m, prior, 2);
  std::vector<Vector> inputs;
  std::vector<BatchObservation> obs;
  for (int k = 1; k <= 6; ++k) {
    obs.push_back({k, m.C, m.observation_variances(), sim.y_target[k - 1]});
    s.data_step(sim.y_target[k - 1]);
    const GaussianStats batch =
        batch_window_posterior(m, prior, inputs, obs, s.window_size());
    CHECK((s.belief().mean - batch.mean).norm() <= 1e-8 * batch.mean.norm());
    CHECK((s.belief().cov - batch.cov).norm() <= 1e-8 * batch.cov.norm());
    s.time_step(sim.inputs[k - 1]);
    inputs.push_back(sim.inputs[k - 1]);
  }
}

TEST_CASE("exact external update equals a stacked batch update") {
  const StateSpaceModel m = tracking_model();
  const SimulatedRun sim = simulate_run(m, 1e-3, 5, 0, 1);
  Flis s(m, vague_tracking_prior(), 0);
  s.data_step(sim.y_target[0]);
  s.external_data_step(sim.y_external[0], 1e-3);

  Matrix h(4, 2);
  h << m.C, m.C;
  Vector gamma(4), z(4);
  gamma << 1e-3, 1e-3, 1e-3, 1e-3;
  z << sim.y_target[0], sim.y_external[0];
  const GaussianStats batch =
      batch_posterior(vague_tracking_prior(), h, gamma, z);
  CHECK((s.belief().mean - batch.mean).norm() <= 1e-9 * batch.mean.norm());
  CHECK((s.belief().cov - batch.cov).norm() <= 1e-9 * batch.cov.norm());
}

TEST_CASE("estimate extraction addresses window blocks") {
  GaussianStats belief;
  belief.mean = Vector(6);
  belief.mean << 1, 2, 3, 4, 5, 6;
  belief.cov = Matrix::Identity(6, 6);

  const Vector newest = filtered_estimate(belief, 2);
  CHECK(newest(0) == 1.0);
  CHECK(newest(1) == 2.0);

  const auto oldest = smoothed_estimate(belief, 2, 2);
  REQUIRE(oldest.has_value());
  CHECK((*oldest)(0) == 5.0);
  CHECK((*oldest)(1) == 6.0);

  SUBCASE("window of one: both estimates coincide") {
    GaussianStats single;
    single.mean = Vector::Constant(2, 9.0);
    single.cov = Matrix::Identity(2, 2);
    const auto sm = smoothed_estimate(single, 2, 0);
    REQUIRE(sm.has_value());
    CHECK(*sm == filtered_estimate(single, 2));
  }
  SUBCASE("not yet available before the window fills") {
    CHECK_FALSE(smoothed_estimate(belief, 2, 3).has_value());
  }
}

TEST_CASE("baseline steps") {
  const StateSpaceModel m = tracking_model();
  const SimulatedRun sim = simulate_run(m, 1e-3, 9, 0, 40);

  SUBCASE("near-useless external stream degenerates to the isolated filter") {
    Flis exact(m, vague_tracking_prior(), 0);
    Flis isolated(m, vague_tracking_prior(), 0);
    const double huge = 1e30;
    for (int k = 0; k < 40; ++k) {
      const GaussianStats pe =
          baseline_step(BaselineKind::kExactFilter, exact, sim.inputs[k],
                        sim.y_target[k], &sim.y_external[k], &huge);
      const GaussianStats pi =
          baseline_step(BaselineKind::kIsolatedFilter, isolated, sim.inputs[k],
                        sim.y_target[k], nullptr, nullptr);
      CHECK((pe.mean - pi.mean).norm() <= 1e-8 * std::max(pi.mean.norm(), 1e-9));
      CHECK((pe.cov - pi.cov).norm() <= 1e-8 * pi.cov.norm());
    }
  }
  SUBCASE("smoothing with both streams beats filtering with both streams") {
    const int runs = 60, horizon = 50, lag = 2;
    double kf_total = 0.0, fls_total = 0.0;
    for (int run = 0; run < runs; ++run) {
      const SimulatedRun r = simulate_run(m, 1e-3, 1234, run, horizon);
      Flis kf(m, vague_tracking_prior(), 0);
      Flis fls(m, vague_tracking_prior(), lag);
      const double re = 1e-3;
      std::vector<double> kf_se, fls_se;
      for (int k = 1; k <= horizon; ++k) {
        const GaussianStats pk =
            baseline_step(BaselineKind::kExactFilter, kf, r.inputs[k - 1],
                          r.y_target[k - 1], &r.y_external[k - 1], &re);
        if (k <= horizon - lag) {
          kf_se.push_back(squared_error(r.states[k - 1], pk.mean.head(2)));
        }
        const GaussianStats pf =
            baseline_step(BaselineKind::kExactSmoother, fls, r.inputs[k - 1],
                          r.y_target[k - 1], &r.y_external[k - 1], &re);
        if (const auto sm = smoothed_estimate(pf, 2, lag)) {
          fls_se.push_back(squared_error(r.states[k - 1 - lag], *sm));
        }
      }
      kf_total += mean_squared_error(kf_se, lag, horizon);
      fls_total += mean_squared_error(fls_se, lag, horizon);
    }
    CHECK(fls_total <= kf_total);
  }
  SUBCASE("filter kinds demand a lag-0 estimator") {
    Flis lagged(m, vague_tracking_prior(), 2);
    CHECK_THROWS_AS(baseline_step(BaselineKind::kIsolatedFilter, lagged,
                                  sim.inputs[0], sim.y_target[0], nullptr,
                                  nullptr),
                    std::invalid_argument);
  }
  SUBCASE("exact kinds demand the external stream") {
    Flis kf(m, vague_tracking_prior(), 0);
    CHECK_THROWS_AS(baseline_step(BaselineKind::kExactFilter, kf, sim.inputs[0],
                                  sim.y_target[0], nullptr, nullptr),
                    std::invalid_argument);
  }
}

TEST_CASE("step argument validation") {
  const StateSpaceModel m = tracking_model();
  Flis s(m, vague_tracking_prior(), 1);
  CHECK_THROWS_AS(s.data_step(Vector::Ones(3)), std::invalid_argument);
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(s.data_step(bad), std::invalid_argument);
  CHECK_THROWS_AS(s.external_data_step(Vector::Ones(2), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(s.time_step(Vector::Ones(2)), std::invalid_argument);
  CHECK_THROWS_AS(Flis(m, vague_tracking_prior(), -1), std::invalid_argument);
}
