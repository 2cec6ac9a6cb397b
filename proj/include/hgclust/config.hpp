#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgclust/experiments.hpp"
#include "hgclust/extract.hpp"
#include "hgclust/model.hpp"
#include "hgclust/sdp.hpp"
#include "hgclust/subspace.hpp"

namespace hgclust {

using Json = nlohmann::ordered_json;

/// Invalid run configuration (unknown key, wrong type, violated invariant).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateConfig {
  std::vector<Index> sizes{20, 20, 20};
  Index outliers = 0;
  int d = 3;
  double p = 0.8;
  double q = 0.1;
  WeightLaw law = WeightLaw::bernoulli;
  double observe = 1.0;  // observation probability; < 1 writes the zero-imputed hypergraph
  std::uint64_t seed = 0;

  ModelParams params() const;
  Partition truth() const;
  void validate() const;
};

struct SubspaceRunConfig {
  SubspaceConfig cloud;
  int trials = 20;
  double bandwidth = 0.0;  // <= 0 selects the default
  SolverConfig solver;
  KMedoidsConfig rounding;
  int baseline_restarts = 10;

  void validate() const;
};

struct ConcentrationConfig {
  std::vector<Index> ns{40, 80, 160};
  int d = 3;
  double mu = 0.5;
  int k = 1;
  int trials = 20;
  std::uint64_t seed = 0;

  std::vector<ModelParams> grid() const;
  void validate() const;
};

// Each reader starts from the given defaults, overwrites the keys present and
// rejects unknown keys. Every writer emits all fields.
Json to_json(const SolverConfig& c);
Json to_json(const KMedoidsConfig& c);
Json to_json(const BenchConfig& c);
Json to_json(const OutlierConfig& c);
Json to_json(const GenerateConfig& c);
Json to_json(const SubspaceRunConfig& c);
Json to_json(const ConcentrationConfig& c);

void merge(const Json& j, SolverConfig& c);
void merge(const Json& j, KMedoidsConfig& c);
void merge(const Json& j, BenchConfig& c);
void merge(const Json& j, OutlierConfig& c);
void merge(const Json& j, GenerateConfig& c);
void merge(const Json& j, SubspaceRunConfig& c);
void merge(const Json& j, ConcentrationConfig& c);

/// Parses a JSON object from a file; ConfigError on I/O or syntax errors.
Json load_json_file(const std::string& path);

/// Runs validate() and rethrows std::invalid_argument as ConfigError.
template <class Config>
void validate_config(const Config& c) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace hgclust
