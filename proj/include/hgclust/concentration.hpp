#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hgclust/model.hpp"

namespace hgclust {

/// Largest absolute eigenvalue of A - EA.
double spectral_deviation(const Matrix& a, const Matrix& ea);
double spectral_deviation(const WeightedHypergraph& w, const Matrix& ea);

/// max_i |lambda_i(A) - lambda_i(EA)| with both spectra sorted; Weyl says this
/// never exceeds spectral_deviation(A, EA).
double weyl_gap(const Matrix& a, const Matrix& ea);

/// n C(n-2, d-2) mu >= log n.
bool concentration_hypothesis(Index n, int d, double mu);

/// sqrt(n C(n-2, d-2) mu), the scale the deviation is normalized by.
double deviation_scale(Index n, int d, double mu);

struct ConcentrationTrial {
  std::uint64_t seed = 0;
  double deviation = 0.0;
  double ratio = 0.0;
  double weyl = 0.0;
};

struct ConcentrationReport {
  Index n = 0;
  int d = 0;
  double mu_n = 0.0;  // max(p, q)
  int trials = 0;
  std::vector<ConcentrationTrial> results;
  double max_ratio = 0.0;
  bool skipped = false;
  std::string warning;

  std::vector<double> ratios() const;
};

/// For each grid point samples `trials` hypergraphs from the block model with
/// k near-equal contiguous communities and reports the normalized deviation.
/// Grid points that violate the hypothesis are skipped with a warning.
std::vector<ConcentrationReport> verify_bound(const std::vector<ModelParams>& grid, int trials,
                                              std::uint64_t seed, unsigned jobs = 1);

/// CSV with header n,d,mu,trial,deviation,ratio.
void write_concentration_csv(std::ostream& out, const std::vector<ConcentrationReport>& reports);

}  // namespace hgclust
