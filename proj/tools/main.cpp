#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hgclust/concentration.hpp"
#include "hgclust/config.hpp"
#include "hgclust/experiments.hpp"
#include "hgclust/extract.hpp"
#include "hgclust/io.hpp"
#include "hgclust/oracle.hpp"
#include "hgclust/rng.hpp"
#include "hgclust/similarity.hpp"
#include "hgclust/subspace.hpp"
#include "hgclust/tune.hpp"

namespace fs = std::filesystem;
using namespace hgclust;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kInputError = 2, kNotConverged = 3, kConfigError = 4 };

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
  cmd->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out", c.out, "output directory");
}

Json config_json(const Common& c) { return c.config.empty() ? Json::object() : load_json_file(c.config); }

fs::path out_file(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  return fs::path(c.out) / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string csv_header(const Json& config) { return "# config: " + config.dump() + "\n"; }

std::string svg_with_config(const std::string& svg, const Json& config) {
  std::string text = config.dump();
  // "--" is not allowed inside an XML comment.
  for (std::size_t pos = 0; (pos = text.find("--", pos)) != std::string::npos;) text.replace(pos, 2, "- -");
  return "<!-- config: " + text + " -->\n" + svg;
}

// Pulls the optional solver/rounding blocks out of a config object.
void read_solver_blocks(const Json& j, SolverConfig& solver, KMedoidsConfig& rounding) {
  for (const auto& item : j.items()) {
    if (item.key() != "solver" && item.key() != "rounding") throw ConfigError("config: unknown key '" + item.key() + "'");
  }
  if (j.contains("solver")) merge(j["solver"], solver);
  if (j.contains("rounding")) merge(j["rounding"], rounding);
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  Common common;
  std::vector<Index> sizes;
  std::optional<Index> outliers;
  std::optional<int> d;
  std::optional<double> p, q, observe;
  std::optional<std::string> law;
};

int run_generate(const GenerateArgs& a) {
  GenerateConfig cfg;
  merge(config_json(a.common), cfg);
  if (!a.sizes.empty()) cfg.sizes = a.sizes;
  if (a.outliers) cfg.outliers = *a.outliers;
  if (a.d) cfg.d = *a.d;
  if (a.p) cfg.p = *a.p;
  if (a.q) cfg.q = *a.q;
  if (a.observe) cfg.observe = *a.observe;
  if (a.law) merge(Json{{"law", *a.law}}, cfg);
  if (a.common.seed) cfg.seed = *a.common.seed;
  validate_config(cfg);

  const ModelParams params = cfg.params();
  const Partition truth = cfg.truth();
  WeightedHypergraph h = truth.outlier_count() > 0 ? sample_whpcm(params, truth) : sample_whsbm(params, truth);
  if (cfg.observe < 1.0) h = zero_impute(partial_observe(h, cfg.observe, derive_seed(cfg.seed, 1)));

  save_hypergraph(out_file(a.common, "hypergraph.txt").string(), h);
  save_partition(out_file(a.common, "truth.txt").string(), truth);

  ModelParams effective = params;
  effective.p *= cfg.observe;
  effective.q *= cfg.observe;
  const SimilarityProfile prof = expected_similarity(effective, truth).profile;
  Json meta = {{"config", to_json(cfg)},
               {"n", params.n},
               {"edges", h.edge_count()},
               {"p_minus", prof.p_minus},
               {"q_plus", prof.q_plus}};
  if (prof.p_minus > prof.q_plus) meta["lambda_mid"] = 0.5 * (prof.p_minus + prof.q_plus);
  if (params.p > params.q) {
    const RecoveryCheck check = recovery_condition(effective, truth.s_min());
    meta["recovery_condition"] = {{"holds", check.holds}, {"lhs", check.lhs}, {"rhs", check.rhs}};
  }
  write_file(out_file(a.common, "generate.json"), meta.dump(2) + "\n");
  std::cout << "wrote " << h.edge_count() << " edges on " << params.n << " nodes to " << a.common.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
  Common common;
  std::string input;
  int k = 0;
  std::optional<double> lambda;
  bool automatic = false;
  std::optional<Index> constrained_size;
  std::string truth;
};

int run_cluster(const ClusterArgs& a) {
  SolverConfig solver;
  KMedoidsConfig rounding;
  read_solver_blocks(config_json(a.common), solver, rounding);
  if (a.common.seed) rounding.seed = *a.common.seed;
  validate_config(solver);
  const int modes = (a.lambda ? 1 : 0) + (a.automatic ? 1 : 0) + (a.constrained_size ? 1 : 0);
  if (modes != 1) throw ConfigError("cluster: give exactly one of --lambda, --auto, --constrained-size");

  // Read every input before writing anything.
  const WeightedHypergraph h = load_hypergraph(a.input);
  std::optional<Partition> truth;
  if (!a.truth.empty()) truth = load_partition(a.truth);
  if (a.k < 1 || a.k > h.n()) throw ConfigError("cluster: k must lie in [1, n]");
  if (truth && truth->n() != h.n()) throw ConfigError("cluster: truth partition has the wrong length");

  const Matrix sim = build_similarity(h);
  Json diag = {{"config",
                {{"input", a.input}, {"k", a.k}, {"solver", to_json(solver)}, {"rounding", to_json(rounding)}}}};
  ClusteringResult res;
  if (a.constrained_size) {
    diag["config"]["constrained_size"] = *a.constrained_size;
    res = crtmle_constrained(sim, a.k, *a.constrained_size, solver, rounding);
  } else {
    double lambda = 0.0;
    if (a.automatic) {
      const TuneEstimate est = estimate(sim, rounding.seed);
      lambda = est.lambda_hat;
      diag["tune"] = {{"k_hat", est.k_hat}, {"s_hat", est.s_hat}, {"p_minus_hat", est.p_minus_hat},
                      {"q_plus_hat", est.q_plus_hat}, {"lambda_hat", est.lambda_hat}};
    } else {
      lambda = *a.lambda;
    }
    diag["lambda"] = lambda;
    res = crtmle_from_similarity(sim, a.k, lambda, solver, rounding);
  }
  diag["objective"] = res.solution.objective;
  diag["primal_residual"] = res.solution.primal_residual;
  diag["dual_residual"] = res.solution.dual_residual;
  diag["iterations"] = res.solution.iterations;
  diag["converged"] = res.solution.converged;
  diag["integrality_gap"] = res.solution.integrality_gap();
  if (truth) diag["err"] = misclustering_error(res.partition, *truth);

  save_partition(out_file(a.common, "partition.txt").string(), res.partition);
  write_file(out_file(a.common, "diagnostics.json"), diag.dump(2) + "\n");
  if (!res.solution.converged) {
    std::cerr << "solver did not converge in " << res.solution.iterations << " iterations\n";
    return kNotConverged;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int run_tune(const Common& common, const std::string& input) {
  if (!common.config.empty()) {
    const Json j = config_json(common);
    if (!j.empty()) throw ConfigError("tune: takes no config keys");
  }
  const WeightedHypergraph h = load_hypergraph(input);
  const TuneEstimate est = estimate(build_similarity(h), common.seed.value_or(0));
  const Json out = {{"k_hat", est.k_hat},
                    {"s_hat", est.s_hat},
                    {"p_minus_hat", est.p_minus_hat},
                    {"q_plus_hat", est.q_plus_hat},
                    {"lambda_hat", est.lambda_hat}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

void report_cells(const ExperimentResult& res, const char* axis) {
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& c : res.cells) {
    std::cout << c.algorithm << " " << axis << "=" << c.axis << " p=" << c.p << " mean_err=";
    if (c.skipped) {
      std::cout << "skipped\n";
    } else {
      std::cout << c.mean_err << "\n";
    }
  }
}

struct GridArgs {
  Common common;
  std::vector<Index> axis;
  std::vector<double> ps;
  std::vector<Index> pattern;
  std::optional<double> q;
  std::optional<int> trials;
  bool timing = false;
};

int run_bench_cmd(const GridArgs& a) {
  BenchConfig cfg;
  merge(config_json(a.common), cfg);
  if (!a.axis.empty()) cfg.ns = a.axis;
  if (!a.ps.empty()) cfg.ps = a.ps;
  if (!a.pattern.empty()) cfg.pattern = a.pattern;
  if (a.q) cfg.q = *a.q;
  if (a.trials) cfg.trials = *a.trials;
  if (a.timing) cfg.record_timing = true;
  if (a.common.seed) cfg.seed = *a.common.seed;
  validate_config(cfg);

  const ExperimentResult res = run_bench(cfg, a.common.jobs);
  const Json j = to_json(cfg);
  std::ostringstream csv;
  csv << csv_header(j);
  write_trials_csv(csv, res.rows);
  write_file(out_file(a.common, "bench.csv"), csv.str());
  for (const char* alg : {"crtmle", "spectral"}) {
    const std::string svg = render_heatmap_svg(heatmap_grid(res, alg, "n"));
    write_file(out_file(a.common, std::string("bench_") + alg + ".svg"), svg_with_config(svg, j));
  }
  report_cells(res, "n");
  return kOk;
}

int run_outliers_cmd(const GridArgs& a, std::optional<Index> s, std::optional<int> k) {
  OutlierConfig cfg;
  merge(config_json(a.common), cfg);
  if (!a.axis.empty()) cfg.outliers = a.axis;
  if (!a.ps.empty()) cfg.ps = a.ps;
  if (a.q) cfg.q = *a.q;
  if (a.trials) cfg.trials = *a.trials;
  if (s) cfg.s = *s;
  if (k) cfg.k = *k;
  if (a.timing) cfg.record_timing = true;
  if (a.common.seed) cfg.seed = *a.common.seed;
  validate_config(cfg);

  const ExperimentResult res = run_outliers(cfg, a.common.jobs);
  const Json j = to_json(cfg);
  std::ostringstream csv;
  csv << csv_header(j);
  write_trials_csv(csv, res.rows, true);
  write_file(out_file(a.common, "outliers.csv"), csv.str());
  for (const char* alg : {"crtmle", "spectral"}) {
    const std::string svg = render_heatmap_svg(heatmap_grid(res, alg, "n_o"));
    write_file(out_file(a.common, std::string("outliers_") + alg + ".svg"), svg_with_config(svg, j));
  }
  report_cells(res, "n_o");
  return kOk;
}

// ---------------------------------------------------------------------------

struct SubspaceArgs {
  Common common;
  std::optional<int> k;
  std::vector<Index> sizes;
  std::optional<double> sigma, bandwidth;
  std::optional<int> trials;
};

int run_subspace_cmd(const SubspaceArgs& a) {
  SubspaceRunConfig cfg;
  merge(config_json(a.common), cfg);
  if (!a.sizes.empty()) {
    cfg.cloud.sizes = a.sizes;
    if (!a.k) cfg.cloud.k = static_cast<int>(a.sizes.size());
  }
  if (a.k) cfg.cloud.k = *a.k;
  if (a.sigma) cfg.cloud.sigma = *a.sigma;
  if (a.bandwidth) cfg.bandwidth = *a.bandwidth;
  if (a.trials) cfg.trials = *a.trials;
  if (a.common.seed) cfg.cloud.seed = *a.common.seed;
  validate_config(cfg);

  const auto trials = run_subspace_trials(cfg.cloud, cfg.trials, cfg.bandwidth, cfg.solver, cfg.rounding,
                                          cfg.baseline_restarts, a.common.jobs);
  const Json j = to_json(cfg);
  std::ostringstream csv;
  csv << csv_header(j) << "trial,seed,lambda,crtmle_err,spectral_err\n";
  double ours = 0.0;
  double theirs = 0.0;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    csv << t << ',' << trials[t].seed << ',' << format_double(trials[t].lambda) << ','
        << format_double(trials[t].crtmle_err) << ',' << format_double(trials[t].spectral_err) << '\n';
    ours += trials[t].crtmle_err;
    theirs += trials[t].spectral_err;
  }
  write_file(out_file(a.common, "subspace.csv"), csv.str());

  if (!trials.empty()) {
    SubspaceConfig first = cfg.cloud;
    first.seed = trials.front().seed;
    std::ostringstream points;
    points << csv_header(j);
    write_point_cloud_csv(points, generate_lines(first));
    write_file(out_file(a.common, "points.csv"), points.str());
    const double t = static_cast<double>(trials.size());
    std::cout << "crtmle mean_err=" << ours / t << " spectral mean_err=" << theirs / t << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct ConcentrationArgs {
  Common common;
  std::vector<Index> ns;
  std::optional<int> d, trials;
  std::optional<double> mu;
};

int run_concentration_cmd(const ConcentrationArgs& a) {
  ConcentrationConfig cfg;
  merge(config_json(a.common), cfg);
  if (!a.ns.empty()) cfg.ns = a.ns;
  if (a.d) cfg.d = *a.d;
  if (a.mu) cfg.mu = *a.mu;
  if (a.trials) cfg.trials = *a.trials;
  if (a.common.seed) cfg.seed = *a.common.seed;
  validate_config(cfg);

  const auto reports = verify_bound(cfg.grid(), cfg.trials, cfg.seed, a.common.jobs);
  std::ostringstream csv;
  csv << csv_header(to_json(cfg));
  write_concentration_csv(csv, reports);
  write_file(out_file(a.common, "concentration.csv"), csv.str());
  for (const auto& r : reports) {
    if (r.skipped) {
      std::cerr << "warning: " << r.warning << "\n";
      continue;
    }
    std::cout << "n=" << r.n << " d=" << r.d << " mu=" << r.mu_n << " max_ratio=" << r.max_ratio << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  Common common;
  std::string input;
  int k = 0;
  std::string mode = "truncated";
  std::optional<double> p, q, lambda;
};

int run_oracle_cmd(const OracleArgs& a) {
  if (!a.common.config.empty() && !config_json(a.common).empty()) throw ConfigError("oracle: takes no config keys");
  const WeightedHypergraph h = load_hypergraph(a.input);
  if (h.n() > kOracleMaxNodes) throw ConfigError("oracle: n > 10 is refused");
  if (a.k < 1) throw ConfigError("oracle: k must be >= 1");
  Json out = {{"mode", a.mode}, {"k", a.k}};
  Partition best;
  if (a.mode == "mle") {
    if (!a.p || !a.q) throw ConfigError("oracle: mle mode needs --p and --q");
    const MleConfig cfg = MleConfig::make(*a.p, *a.q);
    best = brute_force_mle(h, a.k, cfg);
    out["mu"] = cfg.mu;
  } else if (a.mode == "truncated") {
    if (!a.lambda) throw ConfigError("oracle: truncated mode needs --lambda");
    const TruncatedOptimum opt = brute_force_truncated(build_similarity(h), a.k, *a.lambda);
    best = opt.partition;
    out["lambda"] = *a.lambda;
    out["objective"] = opt.objective;
  } else {
    throw ConfigError("oracle: mode must be 'mle' or 'truncated'");
  }
  out["labels"] = best.labels();
  save_partition(out_file(a.common, "oracle_partition.txt").string(), best);
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hypergraph clustering by convex relaxation of the truncated MLE"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample a weighted hypergraph from the block model");
  add_common(generate, gen.common);
  generate->add_option("--sizes", gen.sizes, "community sizes")->delimiter(',');
  generate->add_option("--outliers", gen.outliers, "outlier nodes (label k+1)");
  generate->add_option("--d", gen.d, "edge size");
  generate->add_option("--p", gen.p, "homogeneous mean weight");
  generate->add_option("--q", gen.q, "heterogeneous mean weight");
  generate->add_option("--law", gen.law, "bernoulli or constant");
  generate->add_option("--observe", gen.observe, "observation probability (zero-imputed)");

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "cluster a hypergraph file");
  add_common(cluster, cl.common);
  cluster->add_option("--input", cl.input, "hypergraph file")->required();
  cluster->add_option("--k", cl.k, "number of communities")->required();
  cluster->add_option("--lambda", cl.lambda, "penalty");
  cluster->add_flag("--auto", cl.automatic, "estimate lambda from the spectrum (balanced sizes)");
  cluster->add_option("--constrained-size", cl.constrained_size, "community size s for the outlier-robust program");
  cluster->add_option("--truth", cl.truth, "ground-truth partition for the error report");

  Common tune_common;
  std::string tune_input;
  auto* tune = app.add_subcommand("tune", "estimate k, s, p-, q+ and lambda");
  add_common(tune, tune_common);
  tune->add_option("--input", tune_input, "hypergraph file")->required();

  GridArgs bench_args;
  auto* bench = app.add_subcommand("bench", "CRTMLE vs spectral baseline over an (n, p) grid");
  add_common(bench, bench_args.common);
  bench->add_option("--ns", bench_args.axis, "node counts")->delimiter(',');
  bench->add_option("--ps", bench_args.ps, "homogeneous density constants")->delimiter(',');
  bench->add_option("--pattern", bench_args.pattern, "community size proportions")->delimiter(',');
  bench->add_option("--q", bench_args.q, "heterogeneous density constant");
  bench->add_option("--trials", bench_args.trials, "trials per cell");
  bench->add_flag("--timing", bench_args.timing, "record wall-clock runtimes");

  GridArgs out_args;
  std::optional<Index> out_s;
  std::optional<int> out_k;
  auto* outliers = app.add_subcommand("outliers", "outlier-robust program over an (n_o, p) grid");
  add_common(outliers, out_args.common);
  outliers->add_option("--outlier-counts", out_args.axis, "outlier counts")->delimiter(',');
  outliers->add_option("--ps", out_args.ps, "homogeneous density constants")->delimiter(',');
  outliers->add_option("--q", out_args.q, "heterogeneous density constant");
  outliers->add_option("--s", out_s, "community size");
  outliers->add_option("--k", out_k, "number of communities");
  outliers->add_option("--trials", out_args.trials, "trials per cell");
  outliers->add_flag("--timing", out_args.timing, "record wall-clock runtimes");

  SubspaceArgs sub;
  auto* subspace = app.add_subcommand("subspace", "cluster noisy points on lines through the origin");
  add_common(subspace, sub.common);
  subspace->add_option("--k", sub.k, "number of lines");
  subspace->add_option("--sizes", sub.sizes, "points per line")->delimiter(',');
  subspace->add_option("--sigma", sub.sigma, "noise standard deviation");
  subspace->add_option("--bandwidth", sub.bandwidth, "kernel bandwidth (default: twice the 5th percentile of triple residuals)");
  subspace->add_option("--trials", sub.trials, "paired trials");

  ConcentrationArgs conc;
  auto* concentration = app.add_subcommand("concentration", "spectral deviation of A around E[A]");
  add_common(concentration, conc.common);
  concentration->add_option("--ns", conc.ns, "node counts")->delimiter(',');
  concentration->add_option("--d", conc.d, "edge size");
  concentration->add_option("--mu", conc.mu, "edge weight mean");
  concentration->add_option("--trials", conc.trials, "trials per node count");

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum on a tiny hypergraph (n <= 10)");
  add_common(oracle, orc.common);
  oracle->add_option("--input", orc.input, "hypergraph file")->required();
  oracle->add_option("--k", orc.k, "maximum number of communities")->required();
  oracle->add_option("--mode", orc.mode, "mle or truncated");
  oracle->add_option("--p", orc.p, "homogeneous edge probability (mle)");
  oracle->add_option("--q", orc.q, "heterogeneous edge probability (mle)");
  oracle->add_option("--lambda", orc.lambda, "penalty (truncated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*cluster) return run_cluster(cl);
    if (*tune) return run_tune(tune_common, tune_input);
    if (*bench) return run_bench_cmd(bench_args);
    if (*outliers) return run_outliers_cmd(out_args, out_s, out_k);
    if (*subspace) return run_subspace_cmd(sub);
    if (*concentration) return run_concentration_cmd(conc);
    if (*oracle) return run_oracle_cmd(orc);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
