#include "hgclust/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

namespace hgclust {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
      throw ConfigError("config: unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
void take(const Json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_integer()) throw ConfigError("");
    }
    out = it->template get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void take_optional(const Json& j, const char* key, std::optional<double>& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  double v = 0.0;
  take(j, key, v);
  out = v;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

ModelParams GenerateConfig::params() const {
  Index n = outliers;
  for (Index s : sizes) n += s;
  return {n, d, static_cast<int>(sizes.size()), p, q, law, seed};
}

Partition GenerateConfig::truth() const { return make_partition(sizes, outliers); }

void GenerateConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("generate: sizes must be non-empty");
  for (Index s : sizes) {
    if (s < 1) throw std::invalid_argument("generate: sizes must be positive");
  }
  if (outliers < 0) throw std::invalid_argument("generate: outliers must be >= 0");
  if (!(observe > 0.0 && observe <= 1.0)) throw std::invalid_argument("generate: observe must lie in (0, 1]");
  params().validate();
}

void SubspaceRunConfig::validate() const {
  cloud.validate();
  if (trials < 0) throw std::invalid_argument("subspace: trials must be >= 0");
  if (!std::isfinite(bandwidth)) throw std::invalid_argument("subspace: bandwidth must be finite");
  if (baseline_restarts < 1) throw std::invalid_argument("subspace: baseline_restarts must be >= 1");
  solver.validate();
}

std::vector<ModelParams> ConcentrationConfig::grid() const {
  std::vector<ModelParams> out;
  for (Index n : ns) out.push_back({n, d, k, mu, mu, WeightLaw::bernoulli, seed});
  return out;
}

void ConcentrationConfig::validate() const {
  if (trials < 0) throw std::invalid_argument("concentration: trials must be >= 0");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("concentration: mu must lie in (0, 1]");
  for (const auto& params : grid()) params.validate();
}

Json to_json(const SolverConfig& c) {
  return {{"rho", c.rho},
          {"tol_primal", optional_json(c.tol_primal)},
          {"tol_dual", optional_json(c.tol_dual)},
          {"max_iter", c.max_iter},
          {"over_relaxation", c.over_relaxation},
          {"residual_balancing", c.residual_balancing}};
}

Json to_json(const KMedoidsConfig& c) {
  return {{"restarts", c.restarts}, {"max_iter", c.max_iter}, {"seed", c.seed}};
}

Json to_json(const BenchConfig& c) {
  return {{"ns", c.ns},
          {"ps", c.ps},
          {"q", c.q},
          {"d", c.d},
          {"pattern", c.pattern},
          {"trials", c.trials},
          {"seed", c.seed},
          {"solver", to_json(c.solver)},
          {"rounding", to_json(c.rounding)},
          {"baseline_restarts", c.baseline_restarts},
          {"record_timing", c.record_timing}};
}

Json to_json(const OutlierConfig& c) {
  return {{"k", c.k},
          {"s", c.s},
          {"outliers", c.outliers},
          {"ps", c.ps},
          {"q", c.q},
          {"d", c.d},
          {"trials", c.trials},
          {"seed", c.seed},
          {"solver", to_json(c.solver)},
          {"rounding", to_json(c.rounding)},
          {"baseline_restarts", c.baseline_restarts},
          {"record_timing", c.record_timing}};
}

Json to_json(const GenerateConfig& c) {
  return {{"sizes", c.sizes},
          {"outliers", c.outliers},
          {"d", c.d},
          {"p", c.p},
          {"q", c.q},
          {"law", c.law == WeightLaw::bernoulli ? "bernoulli" : "constant"},
          {"observe", c.observe},
          {"seed", c.seed}};
}

Json to_json(const SubspaceRunConfig& c) {
  return {{"k", c.cloud.k},
          {"sizes", c.cloud.sizes},
          {"sigma", c.cloud.sigma},
          {"seed", c.cloud.seed},
          {"trials", c.trials},
          {"bandwidth", c.bandwidth},
          {"solver", to_json(c.solver)},
          {"rounding", to_json(c.rounding)},
          {"baseline_restarts", c.baseline_restarts}};
}

Json to_json(const ConcentrationConfig& c) {
  return {{"ns", c.ns}, {"d", c.d}, {"mu", c.mu}, {"k", c.k}, {"trials", c.trials}, {"seed", c.seed}};
}

void merge(const Json& j, SolverConfig& c) {
  check_keys(j, {"rho", "tol_primal", "tol_dual", "max_iter", "over_relaxation", "residual_balancing"});
  take(j, "rho", c.rho);
  take_optional(j, "tol_primal", c.tol_primal);
  take_optional(j, "tol_dual", c.tol_dual);
  take(j, "max_iter", c.max_iter);
  take(j, "over_relaxation", c.over_relaxation);
  take(j, "residual_balancing", c.residual_balancing);
}

void merge(const Json& j, KMedoidsConfig& c) {
  check_keys(j, {"restarts", "max_iter", "seed"});
  take(j, "restarts", c.restarts);
  take(j, "max_iter", c.max_iter);
  take(j, "seed", c.seed);
}

void merge(const Json& j, BenchConfig& c) {
  check_keys(j, {"ns", "ps", "q", "d", "pattern", "trials", "seed", "solver", "rounding", "baseline_restarts",
                 "record_timing"});
  take(j, "ns", c.ns);
  take(j, "ps", c.ps);
  take(j, "q", c.q);
  take(j, "d", c.d);
  take(j, "pattern", c.pattern);
  take(j, "trials", c.trials);
  take(j, "seed", c.seed);
  if (j.contains("solver")) merge(j["solver"], c.solver);
  if (j.contains("rounding")) merge(j["rounding"], c.rounding);
  take(j, "baseline_restarts", c.baseline_restarts);
  take(j, "record_timing", c.record_timing);
}

void merge(const Json& j, OutlierConfig& c) {
  check_keys(j, {"k", "s", "outliers", "ps", "q", "d", "trials", "seed", "solver", "rounding", "baseline_restarts",
                 "record_timing"});
  take(j, "k", c.k);
  take(j, "s", c.s);
  take(j, "outliers", c.outliers);
  take(j, "ps", c.ps);
  take(j, "q", c.q);
  take(j, "d", c.d);
  take(j, "trials", c.trials);
  take(j, "seed", c.seed);
  if (j.contains("solver")) merge(j["solver"], c.solver);
  if (j.contains("rounding")) merge(j["rounding"], c.rounding);
  take(j, "baseline_restarts", c.baseline_restarts);
  take(j, "record_timing", c.record_timing);
}

void merge(const Json& j, GenerateConfig& c) {
  check_keys(j, {"sizes", "outliers", "d", "p", "q", "law", "observe", "seed"});
  take(j, "sizes", c.sizes);
  take(j, "outliers", c.outliers);
  take(j, "d", c.d);
  take(j, "p", c.p);
  take(j, "q", c.q);
  if (j.contains("law")) {
    std::string law;
    take(j, "law", law);
    if (law == "bernoulli") {
      c.law = WeightLaw::bernoulli;
    } else if (law == "constant") {
      c.law = WeightLaw::constant;
    } else {
      throw ConfigError("config: law must be 'bernoulli' or 'constant'");
    }
  }
  take(j, "observe", c.observe);
  take(j, "seed", c.seed);
}

void merge(const Json& j, SubspaceRunConfig& c) {
  check_keys(j, {"k", "sizes", "sigma", "seed", "trials", "bandwidth", "solver", "rounding", "baseline_restarts"});
  take(j, "k", c.cloud.k);
  take(j, "sizes", c.cloud.sizes);
  take(j, "sigma", c.cloud.sigma);
  take(j, "seed", c.cloud.seed);
  take(j, "trials", c.trials);
  take(j, "bandwidth", c.bandwidth);
  if (j.contains("solver")) merge(j["solver"], c.solver);
  if (j.contains("rounding")) merge(j["rounding"], c.rounding);
  take(j, "baseline_restarts", c.baseline_restarts);
}

void merge(const Json& j, ConcentrationConfig& c) {
  check_keys(j, {"ns", "d", "mu", "k", "trials", "seed"});
  take(j, "ns", c.ns);
  take(j, "d", c.d);
  take(j, "mu", c.mu);
  take(j, "k", c.k);
  take(j, "trials", c.trials);
  take(j, "seed", c.seed);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) throw ConfigError("config: " + path + " must hold a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
}

}  // namespace hgclust
