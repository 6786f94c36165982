#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <vector>

#include "alift/io.hpp"
#include "alift/sweep.hpp"

namespace alift {

/// A reproducible experiment: random joints drawn uniformly from the
/// simplex (rejecting thin marginals), swept over (alpha, eps) cells.
struct ExperimentSpec {
  int n_instances = 1;
  int s_card = 2;
  int x_card = 2;
  std::uint64_t seed = 0;
  SweepConfig sweep;
  double min_marginal = 1e-4;

  void validate() const;
};

/// Draws joint `instance_index` of the stream identified by `seed`:
/// i.i.d. unit-exponential cells normalized to sum 1 (flat Dirichlet),
/// redrawn while any marginal entry is below min_marginal. Identical
/// output for identical (seed, instance_index) on every platform.
JointDistribution gen_random_joint(int s_card, int x_card, std::uint64_t seed,
                                   std::uint64_t instance_index,
                                   double min_marginal = 1e-4);

struct RunOptions {
  std::filesystem::path out_dir;
  int threads = 1;
  bool resume = false;
  bool emit_grid_json = false;
  /// Receives progress lines; defaults to stderr when unset.
  std::function<void(const std::string&)> progress;
};

/// Which per-instance artifacts to produce.
struct RunSelection {
  bool exact = true;
  bool sweep = true;
  bool baseline = true;
};

/// Per-(method, alpha, eps) aggregate over instances.
struct AggregateCell {
  int n = 0;
  double mean_normalized_utility = 0.0;
  double stderr_normalized_utility = 0.0;
  double mean_alpha_leakage = 0.0;
  double stderr_alpha_leakage = 0.0;
  double mean_maxlift_leakage = 0.0;
  double stderr_maxlift_leakage = 0.0;
  double min_normalized_utility = 0.0;
  double max_normalized_utility = 0.0;
};

struct AggregateKey {
  std::string method;
  AlphaParam alpha = AlphaParam::infinity();
  double eps = 0.0;
  friend bool operator<(const AggregateKey& a, const AggregateKey& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.alpha != b.alpha) return b.alpha < a.alpha;  // larger alpha first
    return a.eps < b.eps;
  }
};

struct AggregateReport {
  std::map<AggregateKey, AggregateCell> cells;
  /// Per-alpha mean universal budget eps_max over instances.
  std::map<AlphaParam, double, std::greater<AlphaParam>> mean_eps_max;
};

/// Runs the selected methods on every instance (instance-parallel when
/// opts.threads > 1), writes per-instance CSV artifacts, aggregates
/// them, writes the plot-ready report series, and returns the report.
AggregateReport run_experiment(const ExperimentSpec& spec,
                               const RunOptions& opts,
                               const RunSelection& sel = RunSelection{});

/// Aggregates result rows (pooled over files) into per-cell means.
AggregateReport aggregate_rows(const std::vector<ResultRow>& rows,
                               const std::vector<ResultRow>& eps_max_rows);

/// Reads per-instance CSV artifacts and emits the report series:
/// report_utility.csv, report_alpha_leakage.csv, report_maxlift_leakage.csv,
/// report_baseline.csv and report_eps_max.csv under out_dir.
AggregateReport build_report(const std::vector<std::filesystem::path>& inputs,
                             const std::filesystem::path& out_dir);

/// Convenience: all result CSVs under a directory (sorted).
std::vector<std::filesystem::path> find_result_files(
    const std::filesystem::path& dir);

}  // namespace alift
