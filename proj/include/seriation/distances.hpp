#pragma once

#include "seriation/core.hpp"

#include <string>
#include <vector>

namespace seriation {

/// Symmetric, nonnegative, zero-diagonal table of estimated row distances.
class DistanceTable {
 public:
  DistanceTable() = default;
  /// Validates symmetry, sign and the zero diagonal.
  explicit DistanceTable(SymMatrix values);

  Index size() const { return values_.rows(); }
  double operator()(Index i, Index j) const { return values_(i, j); }
  const SymMatrix& values() const { return values_; }

  /// Restriction to `subset` (in the given order).
  DistanceTable restrict(const std::vector<Index>& subset) const;

 private:
  SymMatrix values_;
};

/// Constants behind the neighborhood threshold and the epsilon radius.
struct EstimatorConfig {
  /// Signal bound; values <= 0 mean "estimate from Y".
  double A = 0;
  double c_nbhd = 2.0;
  double c_eps = 1.0;
  double kappa = 1.0;
  /// Zero the diagonal of Y before forming sums and inner products.
  bool exclude_diag = false;

  void validate() const;
  /// A if set, otherwise max Y + sqrt(8 log n).
  double resolve_A(const SymMatrix& y) const;
};

enum class NeighborhoodRule { toeplitz, latent };

/// Neighborhood sets together with the indices that fell back to the
/// nearest row sum because their set came out empty.
struct Neighborhoods {
  std::vector<std::vector<Index>> sets;
  std::vector<Index> fallbacks;
  double threshold = 0;
};

Vec row_sums(const SymMatrix& y);

/// N_i = { j != i : |S_j - S_i| <= threshold }, the threshold depending on
/// the rule: 2A + 2 c sqrt(kappa n log n) (Toeplitz), 2 A c sqrt(kappa n log n)
/// (latent).
Neighborhoods neighborhoods(const SymMatrix& y, const EstimatorConfig& cfg,
                            NeighborhoodRule rule = NeighborhoodRule::toeplitz);
double neighborhood_threshold(Index n, double A, const EstimatorConfig& cfg,
                              NeighborhoodRule rule);

/// U_i = max_{j in N_i} <Y_i, Y_j>.
Vec norm_estimates(const SymMatrix& y, const Neighborhoods& nbhd);
Vec norm_estimates(const SymMatrix& gram, const std::vector<std::vector<Index>>& sets);

/// d(i, j)^2 = U_i + U_j - 2 <Y_i, Y_j>, clamped at zero.
DistanceTable dhat_toeplitz(const SymMatrix& y, const EstimatorConfig& cfg);
DistanceTable dhat_latent(const SymMatrix& y, const EstimatorConfig& cfg);

/// Fraction of observed entries of the mask.
double observed_fraction(const SymMatrix& mask);

class InsufficientObservations : public SeriationError {
 public:
  using SeriationError::SeriationError;
};

/// Masked-data estimator: inner products rescaled by the observed fraction.
/// Refuses masks with observed fraction below sqrt(log n) / n.
DistanceTable dhat_missing(const SymMatrix& y_masked, const SymMatrix& mask,
                           const EstimatorConfig& cfg,
                           NeighborhoodRule rule = NeighborhoodRule::toeplitz);

/// d(i, j) = max_k |Y_ik - Y_jk|.
DistanceTable dhat_supnorm(const SymMatrix& y);

/// d(i, j) = ||Y_i - Y_j||, exact when the observation is noiseless.
DistanceTable dhat_euclidean(const SymMatrix& y);

enum class Estimator { toeplitz, latent, missing, supnorm, euclidean };
std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

}  // namespace seriation
