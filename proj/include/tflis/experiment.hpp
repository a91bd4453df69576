#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tflis/metrics.hpp"
#include "tflis/scenario.hpp"

namespace tflis {

/// Per-step squared errors of one realization, one series per requested
/// method. A series covers the scored steps 1 .. horizon-lag; smoothed
/// methods' entry k comes from the estimate produced lag steps later.
/// Unrequested methods have empty series.
struct RunSeries {
  std::array<std::vector<double>, kMethodCount> se;
};

/// Simulates realization `run_index` at external noise r_e and scores every
/// requested method on it. All methods see the same realization.
RunSeries evaluate_single_run(const ScenarioConfig& cfg, double r_e,
                              std::uint64_t run_index);

struct SweepRow {
  double r_e = 0.0;
  std::array<std::optional<RunAggregate>, kMethodCount> scores;
};

/// Monte Carlo scores over the whole r_E grid. Runs are distributed over
/// `jobs` worker threads; reduction is by run index, so the result does not
/// depend on the thread count or schedule.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, int jobs);

/// Per-step mean squared errors across runs at one external noise level.
struct TraceResult {
  double r_e = 0.0;
  int scored_steps = 0;
  std::array<std::vector<double>, kMethodCount> mean_se;  // empty if not requested
};

TraceResult run_trace(const ScenarioConfig& cfg, double r_e, int jobs);

/// CSV renderings. Headers are fixed; unrequested methods leave their cells
/// empty; numbers carry 12 significant digits. The same bytes are produced
/// for the same config and seed regardless of the job count.
std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::array<bool, kMethodCount>& methods);
std::string trace_csv(const TraceResult& trace,
                      const std::array<bool, kMethodCount>& methods);

/// Fixed column layouts.
extern const char* const kSweepCsvHeader;
extern const char* const kTraceCsvHeader;

}  // namespace tflis
