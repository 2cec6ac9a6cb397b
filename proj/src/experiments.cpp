#include "hgclust/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hgclust/baseline.hpp"
#include "hgclust/io.hpp"
#include "hgclust/parallel.hpp"
#include "hgclust/rng.hpp"
#include "hgclust/similarity.hpp"

namespace hgclust {

namespace {

struct Cell {
  Index axis = 0;
  double p = 0.0;
  ModelParams params;
  Partition truth;
  std::vector<Index> sizes;
  bool skipped = false;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

void check_common(int d, int trials, double q, const std::vector<double>& ps, const SolverConfig& solver,
                  int baseline_restarts) {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");
  if (!(q > 0.0)) throw std::invalid_argument("q must be > 0");
  for (double p : ps) {
    if (!(p > q)) throw std::invalid_argument("every p must exceed q");
  }
  if (baseline_restarts < 1) throw std::invalid_argument("baseline_restarts must be >= 1");
  solver.validate();
}

// Runs CRTMLE and the spectral baseline on a shared sample for every (cell, trial).
template <class Solve>
ExperimentResult run_cells(std::vector<Cell> cells, int trials, std::uint64_t seed, bool record_timing,
                           int baseline_restarts, int baseline_k, unsigned jobs, const Solve& solve,
                           std::vector<std::string> warnings) {
  static const char* const kAlgorithms[] = {"crtmle", "spectral"};
  const std::size_t t_count = static_cast<std::size_t>(trials);
  std::vector<TrialRow> rows(cells.size() * t_count * 2);
  std::vector<std::size_t> work;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (!cells[c].skipped) {
      for (std::size_t t = 0; t < t_count; ++t) work.push_back(c * t_count + t);
    }
  }

  parallel_for(work.size(), jobs, [&](std::size_t w) {
    const std::size_t c = work[w] / t_count;
    const std::size_t t = work[w] % t_count;
    const Cell& cell = cells[c];
    ModelParams params = cell.params;
    params.seed = derive_seed(seed, c, t);
    const WeightedHypergraph h =
        cell.truth.outlier_count() > 0 ? sample_whpcm(params, cell.truth) : sample_whsbm(params, cell.truth);

    for (int alg = 0; alg < 2; ++alg) {
      TrialRow& row = rows[2 * work[w] + static_cast<std::size_t>(alg)];
      row.algorithm = kAlgorithms[alg];
      row.n = params.n;
      row.n_o = cell.truth.outlier_count();
      row.p = cell.p;
      row.k = params.k;
      row.sizes = cell.sizes;
      row.trial = static_cast<int>(t);
      row.seed = params.seed;
    }

    auto start = std::chrono::steady_clock::now();
    const Matrix a = build_similarity(h);
    const ClusteringResult res = solve(a, cell, params.seed);
    TrialRow& ours = rows[2 * work[w]];
    ours.runtime_ms = record_timing ? elapsed_ms(start) : 0.0;
    ours.err = misclustering_error(res.partition, cell.truth);
    ours.iterations = res.solution.iterations;
    ours.converged = res.solution.converged;

    start = std::chrono::steady_clock::now();
    const Partition base = spectral_baseline(a, baseline_k, baseline_restarts, params.seed);
    TrialRow& theirs = rows[2 * work[w] + 1];
    theirs.runtime_ms = record_timing ? elapsed_ms(start) : 0.0;
    theirs.err = misclustering_error(base, cell.truth);
  });

  ExperimentResult out;
  out.warnings = std::move(warnings);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int alg = 0; alg < 2; ++alg) {
      CellSummary s{kAlgorithms[alg], cells[c].axis, cells[c].p, cells[c].skipped ? 0 : trials, 0.0,
                    cells[c].skipped};
      if (cells[c].skipped) {
        s.mean_err = std::numeric_limits<double>::quiet_NaN();
      } else if (trials > 0) {
        double sum = 0.0;
        for (std::size_t t = 0; t < t_count; ++t) sum += rows[2 * (c * t_count + t) + static_cast<std::size_t>(alg)].err;
        s.mean_err = sum / static_cast<double>(trials);
      }
      out.cells.push_back(std::move(s));
    }
    if (!cells[c].skipped) {
      auto first = rows.begin() + static_cast<std::ptrdiff_t>(2 * c * t_count);
      out.rows.insert(out.rows.end(), first, first + static_cast<std::ptrdiff_t>(2 * t_count));
    }
  }
  return out;
}

std::string join_sizes(const std::vector<Index>& sizes) {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (i > 0) s += ';';
    s += std::to_string(sizes[i]);
  }
  return s;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Density scaled_density(double c, Index n, int d) {
  const double raw = c * static_cast<double>(n) * std::log(static_cast<double>(n)) / binomial(n, d);
  Density out{std::clamp(raw, 0.0, 1.0), false};
  out.clamped = out.value != raw;
  return out;
}

std::vector<Index> sizes_from_pattern(Index n, const std::vector<Index>& pattern) {
  if (pattern.empty()) throw std::invalid_argument("size pattern is empty");
  long long total = 0;
  for (Index w : pattern) {
    if (w < 1) throw std::invalid_argument("size pattern entries must be positive");
    total += w;
  }
  if (n % total != 0) {
    throw std::invalid_argument("n=" + std::to_string(n) + " is not divisible by the size pattern total " +
                                std::to_string(total));
  }
  std::vector<Index> sizes;
  for (Index w : pattern) sizes.push_back(static_cast<Index>(n / total * w));
  return sizes;
}

void BenchConfig::validate() const {
  check_common(d, trials, q, ps, solver, baseline_restarts);
  for (Index n : ns) {
    const auto sizes = sizes_from_pattern(n, pattern);
    for (Index s : sizes) {
      if (s < 2) throw std::invalid_argument("every community needs at least 2 nodes");
    }
    if (n < d) throw std::invalid_argument("n must be >= d");
  }
}

void OutlierConfig::validate() const {
  check_common(d, trials, q, ps, solver, baseline_restarts);
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (s < 2) throw std::invalid_argument("s must be >= 2");
  for (Index n_o : outliers) {
    if (n_o < 0) throw std::invalid_argument("outlier counts must be >= 0");
  }
}

ExperimentResult run_bench(const BenchConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::vector<Cell> cells;
  std::vector<std::string> warnings;
  for (Index n : cfg.ns) {
    for (double p : cfg.ps) {
      Cell cell;
      cell.axis = n;
      cell.p = p;
      cell.sizes = sizes_from_pattern(n, cfg.pattern);
      cell.truth = make_partition(cell.sizes);
      const Density pn = scaled_density(p, n, cfg.d);
      const Density qn = scaled_density(cfg.q, n, cfg.d);
      cell.params = {n, cfg.d, cfg.k(), pn.value, qn.value, WeightLaw::bernoulli, 0};
      if (pn.clamped || qn.clamped) {
        cell.skipped = true;
        warnings.push_back("cell (n=" + std::to_string(n) + ", p=" + format_double(p) +
                           ") skipped: scaled density exceeds 1");
      }
      cells.push_back(std::move(cell));
    }
  }
  const auto solve = [&](const Matrix& a, const Cell& cell, std::uint64_t seed) {
    const SimilarityProfile prof = expected_similarity(cell.params, cell.truth).profile;
    KMedoidsConfig rounding = cfg.rounding;
    rounding.seed = derive_seed(seed, cfg.rounding.seed);
    return crtmle_from_similarity(a, cell.params.k, 0.5 * (prof.p_minus + prof.q_plus), cfg.solver, rounding);
  };
  ExperimentResult res =
      run_cells(std::move(cells), cfg.trials, cfg.seed, cfg.record_timing, cfg.baseline_restarts, cfg.k(), jobs,
                solve, std::move(warnings));
  for (auto& row : res.rows) row.q = cfg.q;
  return res;
}

ExperimentResult run_outliers(const OutlierConfig& cfg, unsigned jobs) {
  cfg.validate();
  std::vector<Cell> cells;
  std::vector<std::string> warnings;
  const std::vector<Index> sizes(static_cast<std::size_t>(cfg.k), cfg.s);
  for (Index n_o : cfg.outliers) {
    for (double p : cfg.ps) {
      Cell cell;
      cell.axis = n_o;
      cell.p = p;
      cell.sizes = sizes;
      cell.truth = make_partition(sizes, n_o);
      const Index n = cell.truth.n();
      const Density pn = scaled_density(p, n, cfg.d);
      const Density qn = scaled_density(cfg.q, n, cfg.d);
      cell.params = {n, cfg.d, cfg.k, pn.value, qn.value, WeightLaw::bernoulli, 0};
      if (pn.clamped || qn.clamped) {
        cell.skipped = true;
        warnings.push_back("cell (n_o=" + std::to_string(n_o) + ", p=" + format_double(p) +
                           ") skipped: scaled density exceeds 1");
      }
      cells.push_back(std::move(cell));
    }
  }
  const auto solve = [&](const Matrix& a, const Cell&, std::uint64_t seed) {
    KMedoidsConfig rounding = cfg.rounding;
    rounding.seed = derive_seed(seed, cfg.rounding.seed);
    return crtmle_constrained(a, cfg.k, cfg.s, cfg.solver, rounding);
  };
  // The baseline may spend one extra cluster on the outliers.
  const bool any_outliers = std::any_of(cfg.outliers.begin(), cfg.outliers.end(), [](Index v) { return v > 0; });
  ExperimentResult res = run_cells(std::move(cells), cfg.trials, cfg.seed, cfg.record_timing, cfg.baseline_restarts,
                                   cfg.k + (any_outliers ? 1 : 0), jobs, solve, std::move(warnings));
  for (auto& row : res.rows) row.q = cfg.q;
  return res;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRow>& rows, bool with_outliers) {
  out << (with_outliers ? "algorithm,n,n_o,p,q,k,sizes,trial,seed,err,runtime_ms,iterations,converged\n"
                        : "algorithm,n,p,q,k,sizes,trial,seed,err,runtime_ms,iterations,converged\n");
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.n << ',';
    if (with_outliers) out << r.n_o << ',';
    out << format_double(r.p) << ',' << format_double(r.q) << ',' << r.k << ',' << join_sizes(r.sizes) << ','
        << r.trial << ',' << r.seed << ',' << format_double(r.err) << ',' << format_double(r.runtime_ms) << ','
        << r.iterations << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

HeatmapGrid heatmap_grid(const ExperimentResult& result, const std::string& algorithm, const std::string& y_name) {
  HeatmapGrid grid;
  grid.title = algorithm;
  grid.x_name = "p";
  grid.y_name = y_name;
  std::vector<Index> axes;
  std::vector<double> ps;
  for (const auto& c : result.cells) {
    if (c.algorithm != algorithm) continue;
    if (std::find(axes.begin(), axes.end(), c.axis) == axes.end()) axes.push_back(c.axis);
    if (std::find(ps.begin(), ps.end(), c.p) == ps.end()) ps.push_back(c.p);
  }
  for (double p : ps) grid.x_labels.push_back(format_double(p));
  for (Index a : axes) grid.y_labels.push_back(std::to_string(a));
  grid.values.assign(axes.size(), std::vector<double>(ps.size(), std::numeric_limits<double>::quiet_NaN()));
  for (const auto& c : result.cells) {
    if (c.algorithm != algorithm) continue;
    const auto r = std::find(axes.begin(), axes.end(), c.axis) - axes.begin();
    const auto col = std::find(ps.begin(), ps.end(), c.p) - ps.begin();
    grid.values[r][col] = c.mean_err;
  }
  return grid;
}

std::string render_heatmap_svg(const HeatmapGrid& grid) {
  constexpr int kCell = 60;
  constexpr int kLeft = 70;
  constexpr int kTop = 40;
  const int cols = static_cast<int>(grid.x_labels.size());
  const int rows = static_cast<int>(grid.y_labels.size());
  const int width = kLeft + cols * kCell + 20;
  const int height = kTop + rows * kCell + 50;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(grid.title) << "</text>\n";
  char buf[32];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double v = grid.values[r][c];
      const int x = kLeft + c * kCell;
      const int y = kTop + r * kCell;
      if (std::isnan(v)) {
        svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
            << "\" fill=\"none\" stroke=\"#999999\"/>\n";
        svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">n/a</text>\n";
        continue;
      }
      const int gray = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(v, 0.0, 1.0))));
      std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", gray, gray, gray);
      svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\"" << kCell
          << "\" fill=\"" << buf << "\"/>\n";
      std::snprintf(buf, sizeof(buf), "%.3f", v);
      svg << "<text x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2 + 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << (gray < 128 ? "#ffffff" : "#000000") << "\">" << buf << "</text>\n";
    }
  }
  for (int c = 0; c < cols; ++c) {
    svg << "<text x=\"" << kLeft + c * kCell + kCell / 2 << "\" y=\"" << kTop + rows * kCell + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(grid.x_labels[c])
        << "</text>\n";
  }
  for (int r = 0; r < rows; ++r) {
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + r * kCell + kCell / 2 + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(grid.y_labels[r])
        << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + cols * kCell / 2 << "\" y=\"" << kTop + rows * kCell + 40
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(grid.x_name)
      << "</text>\n";
  svg << "<text x=\"12\" y=\"" << kTop + rows * kCell / 2 << "\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape_xml(grid.y_name) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hgclust
