#include "seriation/distances.hpp"

#include "seriation/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seriation {

DistanceTable::DistanceTable(SymMatrix values) : values_(std::move(values)) {
  check_square(values_, "DistanceTable");
  for (Index i = 0; i < values_.rows(); ++i) {
    if (values_(i, i) != 0) throw SeriationError("DistanceTable: nonzero diagonal");
    for (Index j = i + 1; j < values_.cols(); ++j) {
      if (values_(i, j) != values_(j, i)) throw SeriationError("DistanceTable: not symmetric");
      if (!(values_(i, j) >= 0)) throw SeriationError("DistanceTable: negative or NaN entry");
    }
  }
}

DistanceTable DistanceTable::restrict(const std::vector<Index>& subset) const {
  const Index m = static_cast<Index>(subset.size());
  SymMatrix out(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) out(a, b) = values_(subset[a], subset[b]);
  return DistanceTable(std::move(out));
}

void EstimatorConfig::validate() const {
  if (!(c_nbhd > 0) || !(c_eps > 0) || !(kappa > 0))
    throw SeriationError("EstimatorConfig: constants must be positive");
}

double EstimatorConfig::resolve_A(const SymMatrix& y) const {
  return A > 0 ? A : estimate_A(y);
}

Vec row_sums(const SymMatrix& y) { return y.rowwise().sum(); }

double neighborhood_threshold(Index n, double A, const EstimatorConfig& cfg,
                              NeighborhoodRule rule) {
  const double dn = static_cast<double>(n);
  const double spread = cfg.c_nbhd * std::sqrt(cfg.kappa * dn * std::log(dn));
  return rule == NeighborhoodRule::toeplitz ? 2.0 * A + 2.0 * spread : 2.0 * A * spread;
}

namespace {

SymMatrix prepared(const SymMatrix& y, const EstimatorConfig& cfg) {
  check_square(y, "distance estimator");
  if (y.rows() < 2) throw SeriationError("distance estimator: n must be at least 2");
  cfg.validate();
  if (!cfg.exclude_diag) return y;
  SymMatrix z = y;
  z.diagonal().setZero();
  return z;
}

Neighborhoods neighborhoods_from_sums(const Vec& sums, double threshold) {
  const Index n = sums.size();
  Neighborhoods out;
  out.threshold = threshold;
  out.sets.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (j != i && std::abs(sums(j) - sums(i)) <= threshold) out.sets[i].push_back(j);
    if (out.sets[i].empty()) {
      Index best = i == 0 ? 1 : 0;
      for (Index j = 0; j < n; ++j)
        if (j != i && std::abs(sums(j) - sums(i)) < std::abs(sums(best) - sums(i))) best = j;
      out.sets[i].push_back(best);
      out.fallbacks.push_back(i);
    }
  }
  return out;
}

SymMatrix clamped_sqrt_table(const SymMatrix& gram, const Vec& u, double norm_scale,
                             double cross_scale) {
  const Index n = gram.rows();
  SymMatrix d = SymMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double sq = norm_scale * u(i) + norm_scale * u(j) - cross_scale * gram(i, j);
      d(i, j) = d(j, i) = std::sqrt(std::max(0.0, sq));
    }
  return d;
}

DistanceTable dhat_inner(const SymMatrix& y_raw, const EstimatorConfig& cfg,
                         NeighborhoodRule rule) {
  const SymMatrix y = prepared(y_raw, cfg);
  const double A = cfg.resolve_A(y_raw);
  const auto nb = neighborhoods_from_sums(row_sums(y),
                                          neighborhood_threshold(y.rows(), A, cfg, rule));
  const SymMatrix gram = y * y.transpose();
  const Vec u = norm_estimates(gram, nb.sets);
  return DistanceTable(clamped_sqrt_table(gram, u, 1.0, 2.0));
}

}  // namespace

Neighborhoods neighborhoods(const SymMatrix& y, const EstimatorConfig& cfg,
                            NeighborhoodRule rule) {
  const SymMatrix z = prepared(y, cfg);
  return neighborhoods_from_sums(
      row_sums(z), neighborhood_threshold(z.rows(), cfg.resolve_A(y), cfg, rule));
}

Vec norm_estimates(const SymMatrix& gram, const std::vector<std::vector<Index>>& sets) {
  const Index n = gram.rows();
  if (static_cast<Index>(sets.size()) != n) throw SizeMismatch("norm_estimates: size");
  Vec u(n);
  for (Index i = 0; i < n; ++i) {
    if (sets[i].empty()) throw SeriationError("norm_estimates: empty neighborhood");
    double best = -std::numeric_limits<double>::infinity();
    for (Index j : sets[i]) best = std::max(best, gram(i, j));
    u(i) = best;
  }
  return u;
}

Vec norm_estimates(const SymMatrix& y, const Neighborhoods& nbhd) {
  return norm_estimates(SymMatrix(y * y.transpose()), nbhd.sets);
}

DistanceTable dhat_toeplitz(const SymMatrix& y, const EstimatorConfig& cfg) {
  return dhat_inner(y, cfg, NeighborhoodRule::toeplitz);
}

DistanceTable dhat_latent(const SymMatrix& y, const EstimatorConfig& cfg) {
  return dhat_inner(y, cfg, NeighborhoodRule::latent);
}

double observed_fraction(const SymMatrix& mask) {
  check_square(mask, "observed_fraction");
  double ones = 0;
  for (Index j = 0; j < mask.cols(); ++j)
    for (Index i = 0; i < mask.rows(); ++i) {
      if (mask(i, j) != 0 && mask(i, j) != 1)
        throw SeriationError("observed_fraction: mask must be 0/1");
      ones += mask(i, j);
    }
  return ones / static_cast<double>(mask.size());
}

DistanceTable dhat_missing(const SymMatrix& y_masked, const SymMatrix& mask,
                           const EstimatorConfig& cfg, NeighborhoodRule rule) {
  if (mask.rows() != y_masked.rows() || mask.cols() != y_masked.cols())
    throw SizeMismatch("dhat_missing: mask size mismatch");
  const SymMatrix y = prepared(y_masked, cfg);
  const Index n = y.rows();
  const double dn = static_cast<double>(n);
  const double lambda = observed_fraction(mask);
  const double floor = std::sqrt(std::log(dn)) / dn;
  if (lambda < floor)
    throw InsufficientObservations(
        "dhat_missing: observed fraction " + std::to_string(lambda) +
        " is below sqrt(log n)/n = " + std::to_string(floor) +
        "; the estimator needs lambda of at least that order");
  const double A = cfg.resolve_A(y_masked);
  const Vec sums = row_sums(y) / lambda;
  const auto nb = neighborhoods_from_sums(sums, neighborhood_threshold(n, A, cfg, rule));
  const SymMatrix gram = y * y.transpose();
  const Vec u = norm_estimates(gram, nb.sets);
  // Cross products of masked rows carry a factor lambda^2, so U does too.
  const double inv2 = 1.0 / (lambda * lambda);
  return DistanceTable(clamped_sqrt_table(gram, u, inv2, 2.0 * inv2));
}

DistanceTable dhat_supnorm(const SymMatrix& y) {
  check_square(y, "dhat_supnorm");
  const Index n = y.rows();
  SymMatrix d = SymMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = (y.row(i) - y.row(j)).cwiseAbs().maxCoeff();
  return DistanceTable(std::move(d));
}

DistanceTable dhat_euclidean(const SymMatrix& y) {
  check_square(y, "dhat_euclidean");
  const Index n = y.rows();
  SymMatrix d = SymMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (y.row(i) - y.row(j)).norm();
  return DistanceTable(std::move(d));
}

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::toeplitz: return "toeplitz";
    case Estimator::latent: return "latent";
    case Estimator::missing: return "missing";
    case Estimator::supnorm: return "supnorm";
    case Estimator::euclidean: return "euclidean";
  }
  return "toeplitz";
}

Estimator estimator_from_string(const std::string& s) {
  if (s == "toeplitz") return Estimator::toeplitz;
  if (s == "latent") return Estimator::latent;
  if (s == "missing") return Estimator::missing;
  if (s == "supnorm") return Estimator::supnorm;
  if (s == "euclidean") return Estimator::euclidean;
  throw SeriationError("unknown estimator: " + s);
}

}  // namespace seriation
