#include "hgclust/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace hgclust {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <class T>
T parse_number(std::string_view token, int line_no) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

// Reads the next non-empty line, splitting into tokens.
bool next_tokens(std::istream& in, std::string& buffer, std::vector<std::string_view>& tokens, int& line_no) {
  while (std::getline(in, buffer)) {
    ++line_no;
    tokens = split(buffer);
    if (!tokens.empty()) return true;
  }
  return false;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_hypergraph(std::ostream& out, const WeightedHypergraph& h) {
  out << h.n() << ' ' << h.d() << ' ' << h.edge_count() << '\n';
  for (std::size_t e = 0; e < h.edge_count(); ++e) {
    for (Index v : h.nodes(e)) out << v << ' ';
    out << format_double(h.weight(e)) << '\n';
  }
}

WeightedHypergraph read_hypergraph(std::istream& in) {
  std::string buffer;
  std::vector<std::string_view> tokens;
  int line_no = 0;
  if (!next_tokens(in, buffer, tokens, line_no)) throw ParseError("empty hypergraph file");
  if (tokens.size() != 3) throw ParseError("header must be `n d m`");
  const auto n = parse_number<Index>(tokens[0], line_no);
  const auto d = parse_number<int>(tokens[1], line_no);
  const auto m = parse_number<long long>(tokens[2], line_no);
  if (n < 1 || d < 2 || d > n || m < 0) throw ParseError("invalid header values");

  std::vector<std::pair<std::vector<Index>, double>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!next_tokens(in, buffer, tokens, line_no)) throw ParseError("expected " + std::to_string(m) + " edges");
    if (static_cast<int>(tokens.size()) != d + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1) + " fields");
    }
    std::vector<Index> tuple(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
      tuple[j] = parse_number<Index>(tokens[j], line_no);
      if (tuple[j] < 0 || tuple[j] >= n) throw ParseError("line " + std::to_string(line_no) + ": node out of range");
      if (j > 0 && tuple[j - 1] >= tuple[j]) {
        throw ParseError("line " + std::to_string(line_no) + ": nodes must be strictly increasing");
      }
    }
    const double w = parse_number<double>(tokens[d], line_no);
    if (!(w >= 0.0 && w <= 1.0)) throw ParseError("line " + std::to_string(line_no) + ": weight outside [0, 1]");
    edges.emplace_back(std::move(tuple), w);
  }
  if (next_tokens(in, buffer, tokens, line_no)) throw ParseError("trailing content after edges");
  try {
    return WeightedHypergraph::from_edges(n, d, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

void save_hypergraph(const std::string& path, const WeightedHypergraph& h) {
  auto out = open_out(path);
  write_hypergraph(out, h);
}

WeightedHypergraph load_hypergraph(const std::string& path) {
  auto in = open_in(path);
  return read_hypergraph(in);
}

void write_partition(std::ostream& out, const Partition& p) {
  out << p.n() << ' ' << p.k();
  if (p.allows_outliers()) out << ' ' << p.outlier_count();
  out << '\n';
  for (int label : p.labels()) out << label << '\n';
}

Partition read_partition(std::istream& in) {
  std::string buffer;
  std::vector<std::string_view> tokens;
  int line_no = 0;
  if (!next_tokens(in, buffer, tokens, line_no)) throw ParseError("empty partition file");
  if (tokens.size() != 2 && tokens.size() != 3) throw ParseError("header must be `n k [outliers]`");
  const auto n = parse_number<Index>(tokens[0], line_no);
  const auto k = parse_number<int>(tokens[1], line_no);
  const bool outliers = tokens.size() == 3;
  long long declared_outliers = outliers ? parse_number<long long>(tokens[2], line_no) : 0;
  if (n < 1 || k < 1) throw ParseError("invalid partition header");
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!next_tokens(in, buffer, tokens, line_no) || tokens.size() != 1) {
      throw ParseError("expected one label per line for " + std::to_string(n) + " nodes");
    }
    labels.push_back(parse_number<int>(tokens[0], line_no));
  }
  if (next_tokens(in, buffer, tokens, line_no)) throw ParseError("trailing content after labels");
  try {
    Partition p(std::move(labels), k, outliers);
    if (p.outlier_count() != declared_outliers) throw ParseError("outlier count does not match header");
    return p;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

void save_partition(const std::string& path, const Partition& p) {
  auto out = open_out(path);
  write_partition(out, p);
}

Partition load_partition(const std::string& path) {
  auto in = open_in(path);
  return read_partition(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in) {
  std::string buffer;
  std::vector<std::string_view> tokens;
  int line_no = 0;
  if (!next_tokens(in, buffer, tokens, line_no) || tokens.size() != 1) throw ParseError("matrix header must be `n`");
  const auto n = parse_number<Eigen::Index>(tokens[0], line_no);
  if (n < 0) throw ParseError("negative matrix dimension");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!next_tokens(in, buffer, tokens, line_no) || static_cast<Eigen::Index>(tokens.size()) != n) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = parse_number<double>(tokens[j], line_no);
  }
  return m;
}

}  // namespace hgclust
