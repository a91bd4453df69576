#include "tflis/simulate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tflis {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) {
    word = splitmix64(state);
  }
}

RandomStream RandomStream::for_run(std::uint64_t master_seed,
                                   std::uint64_t run_index) {
  std::uint64_t state = master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL;
  return RandomStream(splitmix64(state));
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  const double u1 =
      static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

PrbsGenerator::PrbsGenerator(unsigned seed) : state_(seed) {
  if (seed == 0 || seed > 15) {
    throw std::invalid_argument("register seed must be a nonzero 4-bit value");
  }
}

double PrbsGenerator::next() {
  const double out = (state_ & 1u) ? 1.0 : -1.0;
  const unsigned feedback = (state_ ^ (state_ >> 1)) & 1u;
  state_ = (state_ >> 1) | (feedback << 3);
  return out;
}

SimulatedRun simulate_run(const StateSpaceModel& model, double r_external,
                          std::uint64_t master_seed, std::uint64_t run_index,
                          int horizon) {
  if (!(r_external > 0.0)) {
    throw std::invalid_argument("external noise variance must be positive");
  }
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  const Eigen::Index n = model.state_dim();
  const Eigen::Index m = model.input_dim();
  const Eigen::Index p = model.output_dim();

  // Noise shaping factors. R is diagonal by contract; Q may be singular.
  const Vector target_std = model.observation_variances().cwiseSqrt();
  const double external_std = std::sqrt(r_external);
  Matrix q_chol = Matrix::Zero(n, n);
  if (model.Q.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::LLT<Matrix> llt(model.Q);
    if (llt.info() != Eigen::Success) {
      llt.compute(model.Q + 1e-18 * Matrix::Identity(n, n));
    }
    if (llt.info() != Eigen::Success) {
      throw std::invalid_argument("state noise covariance has no Cholesky factor");
    }
    q_chol = llt.matrixL();
  }

  RandomStream rng = RandomStream::for_run(master_seed, run_index);

  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = -0.05 + 0.1 * rng.uniform();
  }
  PrbsGenerator prbs(1 + static_cast<unsigned>(rng.uniform() * 15.0));

  SimulatedRun run;
  run.states.reserve(horizon);
  run.inputs.reserve(horizon);
  run.y_target.reserve(horizon);
  run.y_external.reserve(horizon);

  for (int k = 1; k <= horizon; ++k) {
    run.states.push_back(x);
    Vector u = Vector::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      u(i) = prbs.next();
    }
    run.inputs.push_back(u);

    const Vector cx = model.C * x;
    Vector yt(p), ye(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      yt(i) = cx(i) + target_std(i) * rng.normal();
    }
    for (Eigen::Index i = 0; i < p; ++i) {
      ye(i) = cx(i) + external_std * rng.normal();
    }
    run.y_target.push_back(yt);
    run.y_external.push_back(ye);

    if (k < horizon) {
      Vector noise(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        noise(i) = rng.normal();
      }
      x = model.A * x + model.B * u + q_chol * noise;
    }
  }
  return run;
}

}  // namespace tflis
