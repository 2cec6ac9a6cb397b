#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hgclust/model.hpp"

namespace hgclust {

/// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);

// Hypergraph text format: header `n d m`, then m lines `i1 ... id w` with
// 0-based strictly increasing node indices. Weights are written shortest round-trip.
void write_hypergraph(std::ostream& out, const WeightedHypergraph& h);
WeightedHypergraph read_hypergraph(std::istream& in);
void save_hypergraph(const std::string& path, const WeightedHypergraph& h);
WeightedHypergraph load_hypergraph(const std::string& path);

// Partition text format: header `n k [outliers]`, then one 1-based label per line.
void write_partition(std::ostream& out, const Partition& p);
Partition read_partition(std::istream& in);
void save_partition(const std::string& path, const Partition& p);
Partition load_partition(const std::string& path);

// Dense matrix dump: header `n`, then n rows of n decimals.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

}  // namespace hgclust
