#include "seriation/robinson.hpp"

#include <numeric>

namespace seriation {

void ToeplitzSpec::validate() const {
  if (theta.size() < 1) throw SeriationError("ToeplitzSpec: empty theta");
  if (!(A > 0)) throw SeriationError("ToeplitzSpec: A must be positive");
  for (Index k = 0; k < theta.size(); ++k) {
    if (theta(k) < 0 || theta(k) > A)
      throw SeriationError("ToeplitzSpec: theta(" + std::to_string(k) + ") outside [0, A]");
    if (k > 0 && theta(k) > theta(k - 1))
      throw SeriationError("ToeplitzSpec: theta is not nonincreasing at " +
                           std::to_string(k));
  }
}

std::vector<PavaBlock> pava_blocks(std::span<const double> values,
                                   std::span<const double> weights, Monotone direction) {
  if (values.empty()) throw SeriationError("pava_isotonic: empty input");
  if (weights.size() != values.size()) throw SizeMismatch("pava_isotonic: weight size");
  const double sign = direction == Monotone::nondecreasing ? 1.0 : -1.0;
  std::vector<PavaBlock> blocks;
  blocks.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(weights[k] > 0)) throw SeriationError("pava_isotonic: weights must be positive");
    blocks.push_back({static_cast<Index>(k), static_cast<Index>(k) + 1, weights[k], values[k]});
    // Pool while the last two blocks violate the order (equal values pool too).
    while (blocks.size() > 1) {
      auto& b = blocks[blocks.size() - 1];
      auto& a = blocks[blocks.size() - 2];
      if (sign * (b.value - a.value) > 0) break;
      const double w = a.weight + b.weight;
      a.value = (a.weight * a.value + b.weight * b.value) / w;
      a.weight = w;
      a.end = b.end;
      blocks.pop_back();
    }
  }
  return blocks;
}

Vec pava_isotonic(std::span<const double> values, std::span<const double> weights,
                  Monotone direction) {
  const auto blocks = pava_blocks(values, weights, direction);
  Vec out(static_cast<Index>(values.size()));
  for (const auto& b : blocks) out.segment(b.begin, b.end - b.begin).setConstant(b.value);
  return out;
}

Vec pava_isotonic(const Vec& values, const Vec& weights, Monotone direction) {
  return pava_isotonic(std::span<const double>(values.data(), values.size()),
                       std::span<const double>(weights.data(), weights.size()), direction);
}

Vec unimodal_fit(std::span<const double> values, std::span<const double> weights,
                 Index mode) {
  const Index n = static_cast<Index>(values.size());
  if (n == 0) throw SeriationError("unimodal_fit: empty input");
  if (mode < 0 || mode >= n) throw SeriationError("unimodal_fit: mode out of range");

  // Fit both chains freely, then lower every block above the mode value t to t.
  // t solves t = weighted mean of v(mode) and of all blocks with value > t.
  std::vector<PavaBlock> blocks;
  if (mode > 0) {
    auto left = pava_blocks(values.subspan(0, mode), weights.subspan(0, mode),
                            Monotone::nondecreasing);
    blocks.insert(blocks.end(), left.begin(), left.end());
  }
  const std::size_t n_left = blocks.size();
  if (mode + 1 < n) {
    auto right = pava_blocks(values.subspan(mode + 1), weights.subspan(mode + 1),
                             Monotone::nonincreasing);
    for (auto& b : right) {
      b.begin += mode + 1;
      b.end += mode + 1;
    }
    blocks.insert(blocks.end(), right.begin(), right.end());
  }
  (void)n_left;

  std::vector<std::size_t> by_value(blocks.size());
  std::iota(by_value.begin(), by_value.end(), std::size_t{0});
  std::stable_sort(by_value.begin(), by_value.end(), [&](std::size_t a, std::size_t b) {
    return blocks[a].value > blocks[b].value;
  });
  double sum = weights[mode] * values[mode];
  double weight = weights[mode];
  double t = values[mode];
  for (std::size_t idx : by_value) {
    const auto& b = blocks[idx];
    if (b.value <= t) break;
    sum += b.weight * b.value;
    weight += b.weight;
    t = sum / weight;
  }

  Vec out(n);
  for (const auto& b : blocks)
    out.segment(b.begin, b.end - b.begin).setConstant(std::min(b.value, t));
  out(mode) = t;
  return out;
}

namespace {

SymMatrix project_rows(const SymMatrix& m) {
  const Index n = m.rows();
  SymMatrix out(n, n);
  std::vector<double> row(n), ones(n, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) row[j] = m(i, j);
    out.row(i) = unimodal_fit(row, ones, i).transpose();
  }
  return out;
}

}  // namespace

ProjectionResult project_robinson(const SymMatrix& m, RobinsonFlags flags, double tol,
                                  Index max_iter) {
  check_square(m, "project_robinson");
  if (!(tol > 0)) throw SeriationError("project_robinson: tol must be positive");
  const Index n = m.rows();
  if (!flags.symmetric_cone) return {project_rows(m), 1, 0.0};
  if (max_iter <= 0) max_iter = 100 * n * n;

  // Dykstra: the symmetric subspace needs no correction term.
  SymMatrix x = 0.5 * (m + m.transpose());
  SymMatrix p = SymMatrix::Zero(n, n);
  double residual = 0;
  for (Index it = 1; it <= max_iter; ++it) {
    const SymMatrix y = project_rows(x + p);
    p += x - y;
    SymMatrix next = 0.5 * (y + y.transpose());
    residual = (next - x).norm();
    x = std::move(next);
    if (residual < tol) return {std::move(x), it, residual};
  }
  throw ConvergenceError("project_robinson: no convergence after " +
                             std::to_string(max_iter) + " iterations, residual " +
                             std::to_string(residual),
                         residual);
}

double l2_loss(const Permutation& pi, const SymMatrix& x, RobinsonFlags flags, double tol,
               Index max_iter) {
  const SymMatrix px = permute(x, pi);
  return (px - project_robinson(px, flags, tol, max_iter).matrix).norm();
}

double oracle_loss_toeplitz(const Permutation& pi, const SymMatrix& x,
                            const ToeplitzSpec& spec) {
  if (spec.size() != x.rows()) throw SizeMismatch("oracle_loss_toeplitz: size mismatch");
  return (permute(x, pi) - toeplitz(spec.theta)).norm();
}

Permutation ranking(const Vec& keys) {
  std::vector<Index> order(keys.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return keys(a) < keys(b); });
  return Permutation::from_order(order);
}

SymMatrix latent_reference(const SymMatrix& x, const Vec& positions) {
  if (positions.size() != x.rows()) throw SizeMismatch("latent_reference: size mismatch");
  return permute(x, ranking(positions));
}

double oracle_loss_latent(const Permutation& pi, const SymMatrix& x, const Vec& positions) {
  const SymMatrix ref = latent_reference(x, positions);
  const SymMatrix px = permute(x, pi);
  const double direct = (px - ref).norm();
  const double flipped = (px.reverse() - ref).norm();
  return std::min(direct, flipped);
}

double oracle_linf_toeplitz(const Permutation& pi, const SymMatrix& x,
                            const ToeplitzSpec& spec) {
  if (spec.size() != x.rows()) throw SizeMismatch("oracle_linf_toeplitz: size mismatch");
  return (permute(x, pi) - toeplitz(spec.theta)).cwiseAbs().maxCoeff();
}

}  // namespace seriation
