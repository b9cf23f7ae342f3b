#pragma once

#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "predprey/analysis.hpp"
#include "predprey/config.hpp"
#include "predprey/solver.hpp"

namespace predprey {

namespace detail {

// Fan one job per trajectory over a small pool; results land in index order,
// so the reduction is identical for any thread count. The lowest-index
// exception wins when several trajectories fail.
template <class Fn>
void parallel_trajectories(int count, int threads, Fn&& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(threads, count);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (int i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

}  // namespace detail

struct EnsembleResult {
  std::vector<TrajectoryRecord> records;
  EnsembleStats stats;
  ThresholdReport report;
  double max_relative_clipped_mass = 0.0;
};

inline TrajectoryRecord run_single(const ExperimentConfig& cfg,
                                   std::uint64_t trajectory_id = 0) {
  const Grid grid = cfg.make_grid();
  SolverContext ctx(cfg.make_coefficients(grid), cfg.make_solver_config());
  return simulate_trajectory(ctx, cfg.u0.on(ctx.basis.grid()),
                             cfg.v0.on(ctx.basis.grid()), trajectory_id,
                             cfg.seed);
}

inline EnsembleResult run_ensemble(const ExperimentConfig& cfg, int threads = 1) {
  const Grid grid = cfg.make_grid();
  SolverContext ctx(cfg.make_coefficients(grid), cfg.make_solver_config());
  const ScalarField u0 = cfg.u0.on(ctx.basis.grid());
  const ScalarField v0 = cfg.v0.on(ctx.basis.grid());

  EnsembleResult out;
  out.records.resize(cfg.trajectories);
  detail::parallel_trajectories(cfg.trajectories, threads, [&](int i) {
    out.records[i] = simulate_trajectory(ctx, u0, v0,
                                         static_cast<std::uint64_t>(i), cfg.seed);
  });
  out.stats = ensemble_reduce(out.records);
  out.report = classify(ctx.basis.grid(), ctx.coeffs, ctx.config.noise);
  for (const TrajectoryRecord& r : out.records)
    out.max_relative_clipped_mass =
        std::max(out.max_relative_clipped_mass, r.relative_clipped_mass());
  return out;
}

namespace detail {

inline void csv_metadata(std::ostringstream& out, const ExperimentConfig& cfg) {
  std::istringstream conf(serialize_config(cfg));
  std::string line;
  while (std::getline(conf, line)) out << "# " << line << "\n";
}

inline void csv_report(std::ostringstream& out, const ThresholdReport& rep) {
  out << "# extinction_margin = " << format_double(rep.extinction_margin) << "\n";
  out << "# H0 = " << format_double(rep.h0) << "\n";
  out << "# R0 = " << format_double(rep.r0) << "\n";
  out << "# delta = " << format_double(rep.delta) << "\n";
  out << "# delta_hat = " << format_double(rep.delta_hat) << "\n";
  out << "# verdict = " << to_string(rep.verdict) << "\n";
  out << "# fired_condition = " << rep.fired_condition << "\n";
}

}  // namespace detail

// Ensemble CSV: '#'-prefixed key=value metadata (config, thresholds), one
// column header row, then the reduced series. Runs with the same config and
// seed produce byte-identical files.
inline std::string ensemble_csv(const ExperimentConfig& cfg,
                                const EnsembleResult& result) {
  std::ostringstream out;
  detail::csv_metadata(out, cfg);
  detail::csv_report(out, result.report);
  out << "# n_traj = " << result.stats.n_traj << "\n";
  out << "# max_relative_clipped_mass = "
      << detail::format_double(result.max_relative_clipped_mass) << "\n";
  out << "time,mean_intU,se_intU,mean_intV,se_intV,mean_intU2,se_intU2,"
         "mean_intV2,se_intV2,mean_intInvU,se_intInvU\n";
  const EnsembleStats& s = result.stats;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << detail::format_double(s.times[i]) << ','
        << detail::format_double(s.mean_int_u[i]) << ','
        << detail::format_double(s.se_int_u[i]) << ','
        << detail::format_double(s.mean_int_v[i]) << ','
        << detail::format_double(s.se_int_v[i]) << ','
        << detail::format_double(s.mean_int_u2[i]) << ','
        << detail::format_double(s.se_int_u2[i]) << ','
        << detail::format_double(s.mean_int_v2[i]) << ','
        << detail::format_double(s.se_int_v2[i]) << ','
        << detail::format_double(s.mean_int_inv_u[i]) << ','
        << detail::format_double(s.se_int_inv_u[i]) << '\n';
  }
  return out.str();
}

inline std::string record_csv(const ExperimentConfig& cfg,
                              const TrajectoryRecord& rec) {
  std::ostringstream out;
  detail::csv_metadata(out, cfg);
  out << "# clip_mass = " << detail::format_double(rec.clip_mass) << "\n";
  out << "# relative_clipped_mass = "
      << detail::format_double(rec.relative_clipped_mass()) << "\n";
  out << "time,intU,intV,intU2,intV2,intInvU,minU,minV\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    out << detail::format_double(rec.times[i]) << ','
        << detail::format_double(rec.int_u[i]) << ','
        << detail::format_double(rec.int_v[i]) << ','
        << detail::format_double(rec.int_u2[i]) << ','
        << detail::format_double(rec.int_v2[i]) << ','
        << detail::format_double(rec.int_inv_u[i]) << ','
        << detail::format_double(rec.min_u[i]) << ','
        << detail::format_double(rec.min_v[i]) << '\n';
  }
  return out.str();
}

inline std::string threshold_text(const ThresholdReport& rep) {
  std::ostringstream out;
  out << "extinction_margin = " << detail::format_double(rep.extinction_margin)
      << "\n"
      << "H0 = " << detail::format_double(rep.h0) << "\n"
      << "R0 = " << detail::format_double(rep.r0) << "\n"
      << "delta = " << detail::format_double(rep.delta) << "\n"
      << "delta_hat = " << detail::format_double(rep.delta_hat) << "\n"
      << "verdict = " << to_string(rep.verdict) << "\n"
      << "fired_condition = " << rep.fired_condition << "\n";
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace predprey
