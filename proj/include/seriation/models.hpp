#pragma once

#include "seriation/random.hpp"
#include "seriation/robinson.hpp"

#include <optional>
#include <string>
#include <variant>

namespace seriation {

/// Symmetric kernel, nonincreasing on [0, inf), values in [0, A].
struct LatentSpec {
  enum class Family { box, triangle, gaussian, table };

  Family family = Family::box;
  double A = 1.0;
  /// Half-width for box and triangle, standard deviation for gaussian.
  double width = 0.1;
  /// Piecewise-constant table: phi(x) = table_values[k] for
  /// table_breaks[k-1] < |x| <= table_breaks[k]; zero past the last break.
  std::vector<double> table_breaks;
  std::vector<double> table_values;
  Index n = 0;

  double operator()(double x) const;
  void validate() const;

  /// phi(x) = A 1{|x| <= 1/sqrt(n)}.
  static LatentSpec box_sqrt_n(Index n, double amplitude);
};

struct NoiseSpec {
  enum class Kind { none, gaussian, bernoulli };
  Kind kind = Kind::none;
  double sigma = 1.0;
  /// Independent draws for (i, j) and (j, i) instead of mirroring.
  bool asymmetric = false;

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double sigma) { return {Kind::gaussian, sigma, false}; }
  static NoiseSpec bernoulli() { return {Kind::bernoulli, 1.0, false}; }
};

struct ModelInstance {
  SymMatrix X;
  SymMatrix Y;
  /// True ordering: permute(X, pi_star) is Robinson.
  Permutation pi_star;
  std::variant<ToeplitzSpec, LatentSpec> spec;
  /// Latent positions (latent model only).
  Vec positions;
  NoiseSpec noise;
  std::optional<SymMatrix> mask;
  double lambda = 1.0;
  std::uint64_t seed = 0;

  bool is_toeplitz() const { return std::holds_alternative<ToeplitzSpec>(spec); }
  Index size() const { return X.rows(); }
  /// Canonical Robinson matrix that permute(X, pi_star) equals.
  SymMatrix reference() const;
  /// Oracle surrogate loss of a candidate ordering.
  double oracle_loss(const Permutation& pi) const;
};

/// Uniformly random permutation of n objects drawn from `rng`.
Permutation random_permutation(Index n, const CounterRng& rng,
                               std::uint64_t stream = streams::permutation);

/// Y = X + E with X = (pi_star)^{-1} . T(theta). A missing `pi` draws one.
ModelInstance gen_toeplitz_instance(const ToeplitzSpec& spec,
                                    const std::optional<Permutation>& pi,
                                    const NoiseSpec& noise, std::uint64_t seed);

/// X(i, j) = phi(V_i - V_j) with V iid uniform on [0, 1].
ModelInstance gen_latent_instance(const LatentSpec& spec, const NoiseSpec& noise,
                                  std::uint64_t seed);
/// Same with fixed positions.
ModelInstance gen_latent_instance(const LatentSpec& spec, const Vec& positions,
                                  const NoiseSpec& noise, std::uint64_t seed);

/// Y <- B (.) Y with B symmetric iid Bernoulli(lambda).
ModelInstance apply_mask(ModelInstance inst, double lambda, std::uint64_t seed);

/// max Y + sqrt(8 log n), an upper bound on A with high probability.
double estimate_A(const SymMatrix& y);

/// Noise matrix E drawn for a signal X (bernoulli draws Y directly, so
/// E = Y - X there).
SymMatrix draw_noise(const SymMatrix& x, const NoiseSpec& noise, const CounterRng& rng);

/// Named profile families used by experiments.
enum class ThetaFamily {
  /// theta_k = A (n - k) / n: increments exactly A / n.
  separated,
  /// Strictly decreasing with increments drawn in [1, 1.25] times a common
  /// scale, normalized to theta_0 = A and theta_{n-1} = 0.
  random_strict,
};

ToeplitzSpec make_theta(ThetaFamily family, Index n, double A, std::uint64_t seed);

std::string to_string(LatentSpec::Family f);
LatentSpec::Family latent_family_from_string(const std::string& s);

}  // namespace seriation
