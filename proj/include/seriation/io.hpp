#pragma once

#include "seriation/core.hpp"

#include <map>
#include <string>

namespace seriation {

class IoError : public SeriationError {
 public:
  using SeriationError::SeriationError;
};

/// Headerless comma-separated rows, full double precision on output.
SymMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const SymMatrix& m);

/// One line of whitespace-separated 1-based images: token k is pi(k) + 1.
Permutation read_permutation(const std::string& path);
void write_permutation(const std::string& path, const Permutation& p);
std::string format_permutation(const Permutation& p);

using KeyValues = std::map<std::string, std::string>;

/// `key=value` lines; blank lines and lines starting with '#' are skipped.
KeyValues read_key_values(const std::string& path);
void write_key_values(const std::string& path, const KeyValues& kv);

std::string format_double(double v);

}  // namespace seriation
