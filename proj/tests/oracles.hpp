#pragma once

// Brute-force reference solvers used only by tests.

#include "seriation/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

using seriation::Index;
using seriation::SymMatrix;
using seriation::Vec;
using Dense = Eigen::MatrixXd;

// min ||x - m|| over the polyhedral cone { G x >= 0 }: the minimizer is the
// projection onto the null space of some active subset, so try all subsets
// and keep the closest feasible candidate.
inline Vec cone_projection(const Dense& g, const Vec& m) {
  const Index r = g.rows();
  double best = std::numeric_limits<double>::infinity();
  Vec arg = m;
  for (long mask = 0; mask < (1L << r); ++mask) {
    std::vector<Index> rows;
    for (Index k = 0; k < r; ++k)
      if (mask & (1L << k)) rows.push_back(k);
    Vec x = m;
    if (!rows.empty()) {
      Dense gs(rows.size(), g.cols());
      for (std::size_t k = 0; k < rows.size(); ++k) gs.row(k) = g.row(rows[k]);
      const Dense pinv = gs.completeOrthogonalDecomposition().pseudoInverse();
      x = m - pinv * (gs * m);
    }
    if ((g * x).minCoeff() < -1e-10) continue;
    const double obj = (x - m).squaredNorm();
    if (obj < best) {
      best = obj;
      arg = x;
    }
  }
  return arg;
}

// Robinson row constraints written on a coordinate map (i, j) -> variable
// index with a per-variable scale, duplicate rows removed.
inline Dense robinson_constraints(Index n, const std::function<Index(Index, Index)>& var,
                                  const Vec& scale) {
  std::vector<Vec> rows;
  auto add = [&](Index hi_i, Index hi_j, Index lo_i, Index lo_j) {
    Vec row = Vec::Zero(scale.size());
    row(var(hi_i, hi_j)) += 1.0 / scale(var(hi_i, hi_j));
    row(var(lo_i, lo_j)) -= 1.0 / scale(var(lo_i, lo_j));
    for (const auto& r : rows)
      if ((r - row).norm() < 1e-12) return;
    rows.push_back(row);
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < i; ++j) add(i, j + 1, i, j);
    for (Index j = i; j + 1 < n; ++j) add(i, j, i, j + 1);
  }
  Dense g(rows.size(), scale.size());
  for (std::size_t k = 0; k < rows.size(); ++k) g.row(k) = rows[k].transpose();
  return g;
}

// Frobenius projection onto R_n by the subset oracle, in coordinates where
// the off-diagonal pairs carry weight sqrt(2).
inline SymMatrix robinson_projection(const SymMatrix& m) {
  const Index n = m.rows();
  const SymMatrix s = 0.5 * (m + m.transpose());
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) pairs.push_back({i, j});
  auto var = [&](Index i, Index j) {
    if (i > j) std::swap(i, j);
    return static_cast<Index>(std::find(pairs.begin(), pairs.end(), std::pair{i, j}) -
                              pairs.begin());
  };
  Vec scale(pairs.size()), z(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    scale(k) = pairs[k].first == pairs[k].second ? 1.0 : std::sqrt(2.0);
    z(k) = scale(k) * s(pairs[k].first, pairs[k].second);
  }
  const Vec p = cone_projection(robinson_constraints(n, var, scale), z);
  SymMatrix out(n, n);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out(pairs[k].first, pairs[k].second) = out(pairs[k].second, pairs[k].first) =
        p(k) / scale(k);
  return out;
}

// Projection onto the row relaxation R'_n (no symmetry), same oracle.
inline SymMatrix row_robinson_projection(const SymMatrix& m) {
  const Index n = m.rows();
  auto var = [n](Index i, Index j) { return i * n + j; };
  Vec scale = Vec::Ones(n * n), z(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) z(var(i, j)) = m(i, j);
  const Vec p = cone_projection(robinson_constraints(n, var, scale), z);
  SymMatrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = p(var(i, j));
  return out;
}

// Nondecreasing weighted isotonic regression by the min-max formula
// f_i = max_{a <= i} min_{b >= i} mean(v[a..b]).
inline std::vector<double> isotonic_minmax(const std::vector<double>& v,
                                          const std::vector<double>& w) {
  const std::size_t n = v.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a <= i; ++a) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t b = i; b < n; ++b) {
        double sw = 0, sv = 0;
        for (std::size_t k = a; k <= b; ++k) {
          sw += w[k];
          sv += w[k] * v[k];
        }
        lo = std::min(lo, sv / sw);
      }
      hi = std::max(hi, lo);
    }
    f[i] = hi;
  }
  return f;
}

inline double det(const Dense& a) {
  const Index n = a.rows();
  if (n == 1) return a(0, 0);
  double s = 0;
  for (Index c = 0; c < n; ++c) {
    Dense minor(n - 1, n - 1);
    for (Index i = 1; i < n; ++i)
      for (Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = a(i, j);
    s += ((c % 2) ? -1.0 : 1.0) * a(0, c) * det(minor);
  }
  return s;
}

// Roots of det(A - t I) located by scanning for sign changes inside the
// Gershgorin interval and refining by bisection. Needs distinct eigenvalues.
inline std::vector<double> eigenvalues_charpoly(const Dense& a, Index grid = 200000) {
  const Index n = a.rows();
  double lo = 0, hi = 0;
  for (Index i = 0; i < n; ++i) {
    const double r = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
    lo = std::min(lo, a(i, i) - r);
    hi = std::max(hi, a(i, i) + r);
  }
  lo -= 1;
  hi += 1;
  auto p = [&](double t) { return det(a - t * Dense::Identity(n, n)); };
  std::vector<double> roots;
  double prev_t = lo, prev = p(lo);
  for (Index k = 1; k <= grid; ++k) {
    const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid);
    const double v = p(t);
    if ((prev < 0) != (v < 0)) {
      double x0 = prev_t, x1 = t, f0 = prev;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (x0 + x1);
        const double fm = p(mid);
        if ((fm < 0) == (f0 < 0)) {
          x0 = mid;
          f0 = fm;
        } else {
          x1 = mid;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    prev_t = t;
    prev = v;
  }
  return roots;
}

// Unit eigenvector for a simple eigenvalue: the largest column of the
// adjugate of A - t I.
inline Vec eigenvector_adjugate(const Dense& a, double t) {
  const Index n = a.rows();
  const Dense b = a - t * Dense::Identity(n, n);
  Dense adj(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      Dense minor(n - 1, n - 1);
      for (Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Index c = 0, cc = 0; c < n; ++c)
          if (c != i) minor(rr, cc++) = b(r, c);
        ++rr;
      }
      adj(i, j) = (((i + j) % 2) ? -1.0 : 1.0) * det(minor);
    }
  Index best = 0;
  for (Index j = 1; j < n; ++j)
    if (adj.col(j).norm() > adj.col(best).norm()) best = j;
  return adj.col(best).normalized();
}

// All permutations of 0..n-1, lexicographic.
inline std::vector<std::vector<Index>> all_orders(Index n) {
  std::vector<Index> o(n);
  std::iota(o.begin(), o.end(), Index{0});
  std::vector<std::vector<Index>> out;
  do out.push_back(o);
  while (std::next_permutation(o.begin(), o.end()));
  return out;
}

// All nonincreasing sequences of length len with values in levels (indices
// into levels, descending).
inline void nonincreasing_sequences(Index len, Index n_levels,
                                    const std::function<void(const std::vector<Index>&)>& f) {
  std::vector<Index> s(len, n_levels - 1);
  std::function<void(Index, Index)> rec = [&](Index pos, Index cap) {
    if (pos == len) {
      f(s);
      return;
    }
    for (Index l = cap; l >= 0; --l) {
      s[pos] = l;
      rec(pos + 1, l);
    }
  };
  rec(0, n_levels - 1);
}

}  // namespace oracle
