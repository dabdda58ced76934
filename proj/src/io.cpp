#include "seriation/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace seriation {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(where + ": not a number: '" + tok + "'");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SymMatrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ','))
      row.push_back(parse_double(trim(tok), path + ":" + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }
  const Index n = static_cast<Index>(rows.size());
  SymMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != n)
      throw IoError(path + ": row " + std::to_string(i + 1) + " has " +
                    std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
    for (Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const std::string& path, const SymMatrix& m) {
  auto out = open_out(path);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

std::string format_permutation(const Permutation& p) {
  std::string s;
  for (Index k = 0; k < p.size(); ++k) s += (k ? " " : "") + std::to_string(p(k) + 1);
  return s;
}

Permutation read_permutation(const std::string& path) {
  auto in = open_in(path);
  std::vector<Index> map;
  std::string tok;
  while (in >> tok) {
    Index v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || v < 1)
      throw IoError(path + ": bad permutation entry '" + tok + "'");
    map.push_back(v - 1);
  }
  try {
    return Permutation(std::move(map));
  } catch (const SeriationError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_permutation(const std::string& path, const Permutation& p) {
  auto out = open_out(path);
  out << format_permutation(p) << '\n';
}

KeyValues read_key_values(const std::string& path) {
  auto in = open_in(path);
  KeyValues kv;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void write_key_values(const std::string& path, const KeyValues& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

}  // namespace seriation
