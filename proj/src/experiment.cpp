#include "tflis/experiment.hpp"

#include <atomic>
#include <charconv>
#include <stdexcept>
#include <thread>

#include "tflis/flis.hpp"
#include "tflis/simulate.hpp"
#include "tflis/tflis.hpp"

namespace tflis {

const char* const kSweepCsvHeader =
    "r_E,mse_iKF,se_iKF,mse_iFLS,se_iFLS,mse_KF,se_KF,mse_FLS,se_FLS,"
    "mse_TFLIS_F,se_TFLIS_F,mse_TFLIS_S,se_TFLIS_S";
const char* const kTraceCsvHeader =
    "k,se_iKF,se_iFLS,se_KF,se_FLS,se_TFLIS_F,se_TFLIS_S";

namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

int clamp_jobs(int jobs) {
  if (jobs <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    jobs = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return jobs;
}

/// Runs body(run_index) for every run on a small worker pool. Each index is
/// processed exactly once; writers only touch their own index's slot.
template <typename Body>
void parallel_runs(int runs, int jobs, const Body& body) {
  jobs = std::min(clamp_jobs(jobs), runs);
  if (jobs <= 1) {
    for (int i = 0; i < runs; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) {
    th.join();
  }
}

}  // namespace

RunSeries evaluate_single_run(const ScenarioConfig& cfg, double r_e,
                              std::uint64_t run_index) {
  const int horizon = cfg.horizon;
  const int lag = cfg.lag;
  const int scored = horizon - lag;
  const int n = static_cast<int>(cfg.model.state_dim());

  const SimulatedRun sim =
      simulate_run(cfg.model, r_e, cfg.master_seed, run_index, horizon);

  RunSeries out;
  auto series = [&](Method m) -> std::vector<double>& {
    return out.se[static_cast<int>(m)];
  };
  for (int i = 0; i < kMethodCount; ++i) {
    if (cfg.methods[i]) {
      out.se[i].assign(static_cast<std::size_t>(scored), 0.0);
    }
  }

  const GaussianStats prior = cfg.prior();
  std::optional<Flis> kf_iso, kf_exact, fls_iso, fls_exact;
  std::optional<Tflis> transfer;
  if (cfg.wants(Method::kIsolatedKf)) {
    kf_iso.emplace(cfg.model, prior, 0);
  }
  if (cfg.wants(Method::kExactKf)) {
    kf_exact.emplace(cfg.model, prior, 0);
  }
  if (cfg.wants(Method::kIsolatedFls)) {
    fls_iso.emplace(cfg.model, prior, lag);
  }
  if (cfg.wants(Method::kExactFls)) {
    fls_exact.emplace(cfg.model, prior, lag);
  }
  if (cfg.wants(Method::kTransferFilter) ||
      cfg.wants(Method::kTransferSmoother)) {
    transfer.emplace(cfg.model, prior, WishartStats(cfg.sigma0, cfg.nu0), lag,
                     cfg.ivb);
  }

  for (int k = 1; k <= horizon; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    const Vector& u = sim.inputs[i];
    const Vector& yt = sim.y_target[i];
    const Vector& ye = sim.y_external[i];

    if (kf_iso) {
      const GaussianStats post = baseline_step(BaselineKind::kIsolatedFilter,
                                               *kf_iso, u, yt, nullptr, nullptr);
      if (k <= scored) {
        series(Method::kIsolatedKf)[i] =
            squared_error(sim.states[i], filtered_estimate(post, n));
      }
    }
    if (kf_exact) {
      const GaussianStats post = baseline_step(BaselineKind::kExactFilter,
                                               *kf_exact, u, yt, &ye, &r_e);
      if (k <= scored) {
        series(Method::kExactKf)[i] =
            squared_error(sim.states[i], filtered_estimate(post, n));
      }
    }
    if (fls_iso) {
      const GaussianStats post = baseline_step(BaselineKind::kIsolatedSmoother,
                                               *fls_iso, u, yt, nullptr, nullptr);
      if (const auto sm = smoothed_estimate(post, n, lag)) {
        series(Method::kIsolatedFls)[static_cast<std::size_t>(k - lag - 1)] =
            squared_error(sim.states[static_cast<std::size_t>(k - lag - 1)], *sm);
      }
    }
    if (fls_exact) {
      const GaussianStats post = baseline_step(BaselineKind::kExactSmoother,
                                               *fls_exact, u, yt, &ye, &r_e);
      if (const auto sm = smoothed_estimate(post, n, lag)) {
        series(Method::kExactFls)[static_cast<std::size_t>(k - lag - 1)] =
            squared_error(sim.states[static_cast<std::size_t>(k - lag - 1)], *sm);
      }
    }
    if (transfer) {
      const Tflis::StepResult res = transfer->step(u, yt, ye);
      if (cfg.wants(Method::kTransferFilter) && k <= scored) {
        series(Method::kTransferFilter)[i] =
            squared_error(sim.states[i], filtered_estimate(res.reported, n));
      }
      if (cfg.wants(Method::kTransferSmoother)) {
        if (const auto sm = smoothed_estimate(res.reported, n, lag)) {
          series(Method::kTransferSmoother)[static_cast<std::size_t>(k - lag - 1)] =
              squared_error(sim.states[static_cast<std::size_t>(k - lag - 1)],
                            *sm);
        }
      }
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, int jobs) {
  std::vector<SweepRow> rows;
  rows.reserve(cfg.r_e_grid.size());
  for (double r_e : cfg.r_e_grid) {
    // Per-run MSE slots, filled concurrently, reduced in index order.
    std::array<std::vector<double>, kMethodCount> mse;
    for (int m = 0; m < kMethodCount; ++m) {
      if (cfg.methods[m]) {
        mse[m].assign(static_cast<std::size_t>(cfg.runs), 0.0);
      }
    }
    parallel_runs(cfg.runs, jobs, [&](int run) {
      const RunSeries series =
          evaluate_single_run(cfg, r_e, static_cast<std::uint64_t>(run));
      for (int m = 0; m < kMethodCount; ++m) {
        if (cfg.methods[m]) {
          mse[m][static_cast<std::size_t>(run)] =
              mean_squared_error(series.se[m], cfg.lag, cfg.horizon);
        }
      }
    });
    SweepRow row;
    row.r_e = r_e;
    for (int m = 0; m < kMethodCount; ++m) {
      if (cfg.methods[m]) {
        row.scores[m] = aggregate_runs(mse[m]);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TraceResult run_trace(const ScenarioConfig& cfg, double r_e, int jobs) {
  if (!(r_e > 0.0)) {
    throw std::invalid_argument("external noise variance must be positive");
  }
  const int scored = cfg.horizon - cfg.lag;
  std::vector<RunSeries> all(static_cast<std::size_t>(cfg.runs));
  parallel_runs(cfg.runs, jobs, [&](int run) {
    all[static_cast<std::size_t>(run)] =
        evaluate_single_run(cfg, r_e, static_cast<std::uint64_t>(run));
  });

  TraceResult out;
  out.r_e = r_e;
  out.scored_steps = scored;
  for (int m = 0; m < kMethodCount; ++m) {
    if (!cfg.methods[m]) {
      continue;
    }
    out.mean_se[m].assign(static_cast<std::size_t>(scored), 0.0);
    for (int run = 0; run < cfg.runs; ++run) {  // fixed reduction order
      const auto& se = all[static_cast<std::size_t>(run)].se[m];
      for (int k = 0; k < scored; ++k) {
        out.mean_se[m][static_cast<std::size_t>(k)] +=
            se[static_cast<std::size_t>(k)];
      }
    }
    for (double& v : out.mean_se[m]) {
      v /= static_cast<double>(cfg.runs);
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows,
                      const std::array<bool, kMethodCount>& methods) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const SweepRow& row : rows) {
    out += format_number(row.r_e);
    for (int m = 0; m < kMethodCount; ++m) {
      if (methods[m] && row.scores[m]) {
        out += ',';
        out += format_number(row.scores[m]->mean);
        out += ',';
        out += format_number(row.scores[m]->standard_error);
      } else {
        out += ",,";
      }
    }
    out += '\n';
  }
  return out;
}

std::string trace_csv(const TraceResult& trace,
                      const std::array<bool, kMethodCount>& methods) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (int k = 0; k < trace.scored_steps; ++k) {
    out += std::to_string(k + 1);
    for (int m = 0; m < kMethodCount; ++m) {
      out += ',';
      if (methods[m] && !trace.mean_se[m].empty()) {
        out += format_number(trace.mean_se[m][static_cast<std::size_t>(k)]);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace tflis
