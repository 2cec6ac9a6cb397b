#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hgclust/extract.hpp"
#include "hgclust/model.hpp"
#include "hgclust/sdp.hpp"

namespace hgclust {

struct Density {
  double value = 0.0;
  bool clamped = false;
};

/// c * n * ln(n) / C(n, d), clamped to [0, 1].
Density scaled_density(double c, Index n, int d);

/// Splits n in proportion to `pattern` (e.g. {1, 4, 7}); throws unless exact.
std::vector<Index> sizes_from_pattern(Index n, const std::vector<Index>& pattern);

/// Unbalanced robustness grid over (n, p) with fixed q and a size pattern.
struct BenchConfig {
  std::vector<Index> ns{48, 96};
  std::vector<double> ps{15, 25};
  double q = 5;
  int d = 3;
  std::vector<Index> pattern{1, 1, 1};  // k = pattern.size()
  int trials = 10;
  std::uint64_t seed = 0;
  SolverConfig solver;
  KMedoidsConfig rounding;
  int baseline_restarts = 10;
  bool record_timing = false;  // when off, runtime_ms is written as 0

  int k() const { return static_cast<int>(pattern.size()); }
  void validate() const;
};

/// Outlier grid over (n_o, p): k communities of size s plus n_o outliers.
struct OutlierConfig {
  int k = 3;
  Index s = 20;
  std::vector<Index> outliers{12, 30};
  std::vector<double> ps{15, 25};
  double q = 1;
  int d = 3;
  int trials = 10;
  std::uint64_t seed = 0;
  SolverConfig solver;
  KMedoidsConfig rounding;
  int baseline_restarts = 10;
  bool record_timing = false;

  void validate() const;
};

struct TrialRow {
  std::string algorithm;  // "crtmle" or "spectral"
  Index n = 0;            // total node count
  Index n_o = 0;
  double p = 0.0;
  double q = 0.0;
  int k = 0;
  std::vector<Index> sizes;
  int trial = 0;
  std::uint64_t seed = 0;
  double err = 0.0;
  double runtime_ms = 0.0;
  int iterations = 0;
  bool converged = true;
};

struct CellSummary {
  std::string algorithm;
  Index axis = 0;  // n for bench, n_o for outliers
  double p = 0.0;
  int trials = 0;
  double mean_err = 0.0;
  bool skipped = false;
};

struct ExperimentResult {
  std::vector<TrialRow> rows;  // ordered by (cell, trial, algorithm)
  std::vector<CellSummary> cells;
  std::vector<std::string> warnings;
};

ExperimentResult run_bench(const BenchConfig& cfg, unsigned jobs = 1);
ExperimentResult run_outliers(const OutlierConfig& cfg, unsigned jobs = 1);

/// Bench schema: algorithm,n,p,q,k,sizes,trial,seed,err,runtime_ms,iterations,converged.
/// With `with_outliers` an n_o column follows n. Sizes are ';'-separated.
void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows, bool with_outliers = false);

struct HeatmapGrid {
  std::string title;
  std::string x_name;
  std::string y_name;
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
  std::vector<std::vector<double>> values;  // [row][col]; NaN marks a skipped cell
};

/// Mean error per (axis, p) for one algorithm; rows follow the axis values,
/// columns the p values, both in config order.
HeatmapGrid heatmap_grid(const ExperimentResult& result, const std::string& algorithm, const std::string& y_name);

/// Grayscale SVG: fill = 255 * (1 - err), so lighter means lower error.
std::string render_heatmap_svg(const HeatmapGrid& grid);

}  // namespace hgclust
