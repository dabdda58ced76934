#pragma once

#include "seriation/pines.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace seriation {

struct GapSplit {
  double lambda = 0;
  /// 1 on Q, 0 elsewhere.
  SymMatrix indicator;
  /// Largest value outside Q; Q is every entry strictly above it.
  double threshold = 0;
  /// No gap of size lambda: Q holds every pair.
  bool degenerate = false;
  std::vector<Index> minus, middle, plus;
};

/// Q = entries above the highest gap of size >= lambda among the sorted
/// values of Y.
GapSplit gap_split(const SymMatrix& y, double lambda);

struct IndicatorOrder {
  Permutation pi_hat;
  std::vector<Index> minus, middle, plus;
  /// False when the ordered indicator is not Robinson; everything is in K then.
  bool robinson = true;
  std::vector<std::string> flags;
};

/// Spectral order of 1_Q. Rows that coincide off the diagonal with a
/// neighbor carry no order information; the span from the first such row to
/// the last is K, the rows before and after are already ordered.
IndicatorOrder seriate_indicator(const SymMatrix& indicator);

/// delta on the K-block, in units of the sup-norm noise bound.
inline constexpr double supnorm_delta_factor = 6.0;

/// alpha = 1, epsilon = 2 e, delta = supnorm_delta_factor * e.
PinesParams supnorm_params(double e_inf_bound);

SeriationOutput supnorm_seriate(const SymMatrix& y, double e_inf_bound,
                                const SeriateOptions& opts = {});

enum class Adversary { sign, uniform, gap_closing };
std::string to_string(Adversary a);
Adversary adversary_from_string(const std::string& s);

/// Symmetric E with max |E| <= bound, attained except for uniform. gap_closing pushes entries above `cut`
/// down and the rest up, shrinking the jump of X at `cut`.
SymMatrix adversarial_noise(const SymMatrix& x, double bound, Adversary kind,
                            std::uint64_t seed, double cut = 0);

}  // namespace seriation
