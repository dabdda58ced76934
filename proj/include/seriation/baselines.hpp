#pragma once

#include "seriation/core.hpp"

#include <string>
#include <vector>

namespace seriation {

struct EigenPairs {
  Vec values;      // ascending
  Matrix<double> vectors;  // column k belongs to values(k)
  Index sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix. Stops once the
/// off-diagonal Frobenius norm drops below tol times the matrix norm.
EigenPairs jacobi_eigen(const SymMatrix& m, double tol = 1e-10, Index max_sweeps = 100);

struct SpectralResult {
  Permutation pi_hat;
  Vec fiedler;
  Vec eigenvalues;
  /// More than one eigenvalue near zero: the similarity graph falls apart.
  bool disconnected = false;
  /// The second eigenvalue is repeated, so the Fiedler vector is not unique.
  bool degenerate = false;
  std::vector<std::string> flags;
};

/// Laplacian of Y (shifted to be nonnegative), sorted by its Fiedler vector.
/// The result is defined up to reversal.
SpectralResult spectral_seriation(const SymMatrix& y, double tol = 1e-10);

struct LSConfig {
  /// Toeplitz value grid; <= 0 selects 1 / n^2.
  double grid_step = 0;
  bool snap_to_grid = false;
  /// Bound on the entries; <= 0 estimates it from Y.
  double A = 0;
  Index max_n = 8;
  /// Latent grids: positions in [0, 1] and kernel values in [0, A].
  double v_step = 0.5;
  double phi_step = 0.5;
  /// Max (permutation, V, gap, level) evaluations for ls_latent.
  double node_budget = 5e8;

  void validate() const;
};

class SearchTooLarge : public SeriationError {
 public:
  using SeriationError::SeriationError;
};

struct LSToeplitzResult {
  Permutation pi_hat;
  Vec theta_hat;
  double objective = 0;  // squared Frobenius residual
};

/// Fit of a nonincreasing theta to P . Y for a fixed permutation: weighted
/// isotonic regression of the diagonal means, clamped to [0, A].
Vec fit_toeplitz_profile(const SymMatrix& py, double A, double grid_step = 0);

/// Exhaustive least squares over all permutations, lexicographic first
/// minimizer.
LSToeplitzResult ls_toeplitz(const SymMatrix& y, const LSConfig& cfg = {});

struct LSLatentResult {
  Permutation pi_hat;
  Vec v_hat;    // nondecreasing, in slot order
  Vec phi_hat;  // phi_hat(g) is the kernel at gap g * v_step
  double objective = 0;
};

/// Best nonincreasing kernel on the value grid for fixed slots and positions.
/// `gap_class[i * n + j]` is the gap class of slots i and j, `levels` the
/// ascending value grid. Returns the objective.
double fit_latent_kernel(const SymMatrix& py, const std::vector<Index>& gap_class,
                         Index n_gaps, const Vec& levels, Vec& phi_out);

LSLatentResult ls_latent(const SymMatrix& y, const LSConfig& cfg = {});

}  // namespace seriation
