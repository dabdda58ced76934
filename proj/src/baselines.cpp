#include "seriation/baselines.hpp"

#include "seriation/models.hpp"
#include "seriation/robinson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace seriation {

EigenPairs jacobi_eigen(const SymMatrix& m, double tol, Index max_sweeps) {
  check_square(m, "jacobi_eigen");
  const Index n = m.rows();
  Matrix<double> a = 0.5 * (m + m.transpose());
  Matrix<double> v = Matrix<double>::Identity(n, n);
  const double norm = a.norm();
  EigenPairs out;
  for (; out.sweeps < max_sweeps; ++out.sweeps) {
    double off = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * norm) break;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (out.sweeps == max_sweeps)
    throw SeriationError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                         " sweeps");

  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index x, Index y) { return a(x, x) < a(y, y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(idx[k], idx[k]);
    Vec col = v.col(idx[k]);
    // Fix the sign: first clearly nonzero entry positive.
    for (Index r = 0; r < n; ++r)
      if (std::abs(col(r)) > 1e-9) {
        if (col(r) < 0) col = -col;
        break;
      }
    out.vectors.col(k) = col;
  }
  return out;
}

SpectralResult spectral_seriation(const SymMatrix& y, double tol) {
  check_square(y, "spectral_seriation");
  const Index n = y.rows();
  if (n < 3) throw SeriationError("spectral_seriation: needs n >= 3");
  SymMatrix w = 0.5 * (y + y.transpose());
  const double lo = w.minCoeff();
  if (lo < 0) w.array() -= lo;
  SymMatrix lap = -w;
  for (Index i = 0; i < n; ++i) lap(i, i) = w.row(i).sum() - w(i, i);

  const auto eig = jacobi_eigen(lap, tol);
  SpectralResult out;
  out.eigenvalues = eig.values;
  out.fiedler = eig.vectors.col(1);
  const double scale = std::max(std::abs(eig.values(n - 1)), 1e-300);
  const double zero = 1e-9 * scale;
  out.disconnected = eig.values(1) <= zero || lap.norm() == 0;
  out.degenerate = std::abs(eig.values(2) - eig.values(1)) <= zero;
  if (out.disconnected) out.flags.push_back("disconnected");
  if (out.degenerate) out.flags.push_back("degenerate_fiedler");
  out.pi_hat = ranking(out.fiedler);
  return out;
}

void LSConfig::validate() const {
  if (max_n > 9) throw SeriationError("LSConfig: max_n must be at most 9");
  if (!(v_step > 0) || !(phi_step > 0) || v_step > 1)
    throw SeriationError("LSConfig: grid steps must be positive");
}

namespace {

double resolve_bound(const SymMatrix& y, double A) { return A > 0 ? A : estimate_A(y); }

void fill_permuted(const SymMatrix& y, const std::vector<Index>& order, SymMatrix& py) {
  const Index n = y.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) py(i, j) = y(order[i], order[j]);
}

bool improves(double obj, double best) {
  if (std::isinf(best)) return obj < best;
  return obj < best - 1e-12 * (1 + std::abs(best));
}

}  // namespace

Vec fit_toeplitz_profile(const SymMatrix& py, double A, double grid_step) {
  const Index n = py.rows();
  std::vector<double> means(n), weights(n);
  for (Index k = 0; k < n; ++k) {
    double s = 0;
    for (Index i = 0; i + k < n; ++i) s += py(i, i + k) + (k ? py(i + k, i) : 0.0);
    weights[k] = k ? 2.0 * static_cast<double>(n - k) : static_cast<double>(n);
    means[k] = s / weights[k];
  }
  Vec theta = pava_isotonic(std::span<const double>(means), std::span<const double>(weights),
                            Monotone::nonincreasing);
  theta = theta.cwiseMax(0.0).cwiseMin(A);
  if (grid_step > 0) {
    const double top = std::floor(A / grid_step + 1e-9) * grid_step;
    for (Index k = 0; k < n; ++k)
      theta(k) = std::min(top, std::round(theta(k) / grid_step) * grid_step);
  }
  return theta;
}

LSToeplitzResult ls_toeplitz(const SymMatrix& y, const LSConfig& cfg) {
  check_square(y, "ls_toeplitz");
  cfg.validate();
  const Index n = y.rows();
  if (n > cfg.max_n)
    throw SearchTooLarge("ls_toeplitz: n = " + std::to_string(n) + " exceeds max_n = " +
                         std::to_string(cfg.max_n));
  const double A = resolve_bound(y, cfg.A);
  const double u = cfg.snap_to_grid
                       ? (cfg.grid_step > 0 ? cfg.grid_step : 1.0 / static_cast<double>(n * n))
                       : 0.0;

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  SymMatrix py(n, n);
  LSToeplitzResult best;
  best.objective = std::numeric_limits<double>::infinity();
  do {
    fill_permuted(y, order, py);
    Vec theta = fit_toeplitz_profile(py, A, u);
    const double obj = (py - toeplitz(theta)).squaredNorm();
    if (improves(obj, best.objective)) {
      best.objective = obj;
      best.theta_hat = theta;
      best.pi_hat = Permutation::from_order(order);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

double fit_latent_kernel(const SymMatrix& py, const std::vector<Index>& gap_class,
                         Index n_gaps, const Vec& levels, Vec& phi_out) {
  const Index n = py.rows();
  const Index L = levels.size();
  std::vector<double> s1(n_gaps, 0), s2(n_gaps, 0), cnt(n_gaps, 0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const Index g = gap_class[i * n + j];
      const double v = py(i, j);
      s1[g] += v;
      s2[g] += v * v;
      cnt[g] += 1;
    }
  // best(g, l): cheapest fit of classes 0..g with phi_g = levels(l).
  Matrix<double> best(n_gaps, L);
  Matrix<Index> from(n_gaps, L);
  for (Index g = 0; g < n_gaps; ++g) {
    double run = std::numeric_limits<double>::infinity();
    Index arg = L - 1;
    for (Index l = L - 1; l >= 0; --l) {
      if (g > 0 && best(g - 1, l) < run) {
        run = best(g - 1, l);
        arg = l;
      }
      const double lv = levels(l);
      const double cost = s2[g] - 2 * lv * s1[g] + cnt[g] * lv * lv;
      best(g, l) = cost + (g > 0 ? run : 0.0);
      from(g, l) = arg;
    }
  }
  Index l = 0;
  for (Index k = 1; k < L; ++k)
    if (best(n_gaps - 1, k) < best(n_gaps - 1, l)) l = k;
  const double obj = best(n_gaps - 1, l);
  phi_out.resize(n_gaps);
  for (Index g = n_gaps - 1; g >= 0; --g) {
    phi_out(g) = levels(l);
    if (g > 0) l = from(g, l);
  }
  return std::max(obj, 0.0);
}

namespace {

double binomial(Index a, Index b) {
  double r = 1;
  for (Index k = 1; k <= b; ++k) r = r * static_cast<double>(a - b + k) / static_cast<double>(k);
  return r;
}

}  // namespace

LSLatentResult ls_latent(const SymMatrix& y, const LSConfig& cfg) {
  check_square(y, "ls_latent");
  cfg.validate();
  const Index n = y.rows();
  if (n > std::min<Index>(cfg.max_n, 6))
    throw SearchTooLarge("ls_latent: n = " + std::to_string(n) + " is above the exhaustive cap");
  const double A = resolve_bound(y, cfg.A);
  const Index m = static_cast<Index>(std::floor(1.0 / cfg.v_step + 1e-9)) + 1;
  const Index L = static_cast<Index>(std::floor(A / cfg.phi_step + 1e-9)) + 1;
  Vec levels(L);
  for (Index l = 0; l < L; ++l) levels(l) = static_cast<double>(l) * cfg.phi_step;

  double perms = 1;
  for (Index k = 2; k <= n; ++k) perms *= static_cast<double>(k);
  const double nodes = perms * binomial(m + n - 1, n) * static_cast<double>(m * L + n * n);
  if (nodes > cfg.node_budget)
    throw SearchTooLarge("ls_latent: " + std::to_string(nodes) +
                         " evaluations exceed the node budget");

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  SymMatrix py(n, n);
  std::vector<Index> grid(n), gap(n * n);
  Vec phi;
  LSLatentResult best;
  best.objective = std::numeric_limits<double>::infinity();
  do {
    fill_permuted(y, order, py);
    std::fill(grid.begin(), grid.end(), Index{0});
    while (true) {
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) gap[i * n + j] = std::abs(grid[i] - grid[j]);
      const double obj = fit_latent_kernel(py, gap, m, levels, phi);
      if (improves(obj, best.objective)) {
        best.objective = obj;
        best.pi_hat = Permutation::from_order(order);
        best.v_hat.resize(n);
        for (Index i = 0; i < n; ++i) best.v_hat(i) = static_cast<double>(grid[i]) * cfg.v_step;
        best.phi_hat = phi;
      }
      // Next nondecreasing grid sequence.
      Index k = n - 1;
      while (k >= 0 && grid[k] == m - 1) --k;
      if (k < 0) break;
      const Index v = grid[k] + 1;
      for (Index r = k; r < n; ++r) grid[r] = v;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace seriation
