#pragma once

#include <cstdint>
#include <vector>

#include "tflis/model.hpp"

namespace tflis {

/// Deterministic uniform stream: xoshiro256++ seeded by splitmix64 state
/// expansion. Hand-rolled (rather than std::normal_distribution etc.) so
/// that streams are reproducible bit-for-bit across platforms and easy to
/// port. The exact contract, relied on by the experiment harness:
///
///   - seeding: s[0..3] are four successive splitmix64 outputs starting
///     from the 64-bit seed;
///   - uniform():  ((next_u64() >> 11) + 0) * 2^-53, in [0, 1);
///   - normal():   Box-Muller, cosine branch only, two fresh uniforms per
///     draw: z = sqrt(-2 ln u1) cos(2 pi u2) with u1 in (0, 1] formed as
///     ((next_u64() >> 11) + 1) * 2^-53. No caching, so every normal draw
///     consumes exactly two 64-bit outputs.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Stream for one Monte Carlo run: the child seed is the splitmix64 mix
  /// of master_seed + (run_index + 1) * 0x9E3779B97F4A7C15, which maps
  /// distinct run indices to distinct seeds.
  static RandomStream for_run(std::uint64_t master_seed,
                              std::uint64_t run_index);

  std::uint64_t next_u64();
  double uniform();
  double normal();

 private:
  std::uint64_t s_[4];
};

/// Four-stage maximal-length linear feedback shift register over the taps
/// {4, 3}, emitting +1 for output bit 1 and -1 for bit 0. The register
/// cycles through all 15 nonzero states, so the output is periodic with
/// period 15 and contains eight of one sign and seven of the other.
class PrbsGenerator {
 public:
  /// seed must be a nonzero 4-bit value (1..15).
  explicit PrbsGenerator(unsigned seed);

  /// Emits the output for the current state, then advances the register.
  double next();

  unsigned state() const { return state_; }

 private:
  unsigned state_;
};

/// One simulated trajectory of the target system together with both
/// observation streams.
struct SimulatedRun {
  std::vector<Vector> states;      // x_1 .. x_horizon
  std::vector<Vector> inputs;      // u_1 .. u_horizon, +-1 from the PRBS
  std::vector<Vector> y_target;    // y_1 .. y_horizon, noise covariance R
  std::vector<Vector> y_external;  // noise covariance r_external * I
};

/// Simulates `horizon` steps of the model. The initial state is uniform on
/// [-0.05, 0.05] per component; inputs come from the PRBS whose register is
/// seeded uniformly over its 15 valid values. Draw order, fixed for
/// reproducibility: initial-state uniforms, the PRBS seed uniform, then per
/// step the target noise normals, the external noise normals, and (except
/// at the final step) the process noise normals. Process noise is shaped by
/// the lower Cholesky factor of Q, computed from Q + 1e-18 I when Q is
/// singular and taken as zero when Q is exactly zero.
SimulatedRun simulate_run(const StateSpaceModel& model, double r_external,
                          std::uint64_t master_seed, std::uint64_t run_index,
                          int horizon);

}  // namespace tflis
