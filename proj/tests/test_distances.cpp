#include "seriation/constants.hpp"
#include "seriation/distances.hpp"
#include "seriation/models.hpp"

#include <doctest.h>

#include <cmath>

using namespace seriation;

namespace {

SymMatrix row_distances(const SymMatrix& x) {
  const Index n = x.rows();
  SymMatrix d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

EstimatorConfig with_A(double A) {
  EstimatorConfig c;
  c.A = A;
  return c;
}

bool valid_table(const DistanceTable& d) {
  const auto& v = d.values();
  return is_symmetric(v) && v.minCoeff() >= 0 && v.diagonal().isZero(0);
}

}  // namespace

TEST_CASE("distance table validation") {
  SymMatrix bad = SymMatrix::Zero(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(DistanceTable{bad}, SeriationError);
  bad(1, 0) = 1;
  CHECK_NOTHROW(DistanceTable{bad});
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(DistanceTable{bad}, SeriationError);
  SymMatrix sq(3, 3);
  sq << 0, 1, 2, 1, 0, 3, 2, 3, 0;
  const auto r = DistanceTable(sq).restrict({2, 0});
  CHECK(r(0, 1) == 2);
  CHECK(r.size() == 2);
}

TEST_CASE("row sums") {
  CHECK(row_sums(SymMatrix::Ones(4, 4)) == Vec::Constant(4, 4.0));
  CHECK(row_sums(toeplitz(Vec{{2.0, 1.0, 0.0}})) == Vec{{3.0, 4.0, 3.0}});
  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::separated, 9, 1.0, 0),
                                          std::nullopt, NoiseSpec::gaussian(1), 3);
  const Vec s = row_sums(inst.Y);
  for (Index i = 0; i < 9; ++i) {
    double t = 0;
    for (Index j = 0; j < 9; ++j) t += inst.Y(i, j);
    CHECK(s(i) == doctest::Approx(t));
  }
}

TEST_CASE("neighborhoods") {
  const Index n = 30;
  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::random_strict, n, 1.0, 2),
                                          std::nullopt, NoiseSpec::none(), 2);
  const auto nb = neighborhoods(inst.Y, with_A(1.0));
  CHECK(nb.fallbacks.empty());
  const auto order = inst.pi_star.order();
  for (Index s = 0; s < n; ++s) {
    const auto& set = nb.sets[order[s]];
    auto has = [&](Index obj) { return std::find(set.begin(), set.end(), obj) != set.end(); };
    if (s > 0) CHECK(has(order[s - 1]));
    if (s + 1 < n) CHECK(has(order[s + 1]));
  }
  const auto flat = neighborhoods(SymMatrix::Constant(6, 6, 0.3), with_A(1.0));
  for (Index i = 0; i < 6; ++i) CHECK(flat.sets[i].size() == 5);

  // Two blocks whose row sums differ by more than the threshold.
  SymMatrix blocks = SymMatrix::Zero(10, 10);
  blocks.topLeftCorner(5, 5).setConstant(10.0);
  const auto bn = neighborhoods(blocks, with_A(10.0));
  CHECK(bn.threshold < 50.0);
  for (Index i = 0; i < 10; ++i)
    for (Index j : bn.sets[i]) CHECK((i < 5) == (j < 5));

  CHECK(neighborhood_threshold(100, 1.0, with_A(1.0), NeighborhoodRule::toeplitz) ==
        doctest::Approx(2.0 + 4.0 * std::sqrt(100 * std::log(100.0))));
  CHECK(neighborhood_threshold(100, 1.0, with_A(1.0), NeighborhoodRule::latent) ==
        doctest::Approx(4.0 * std::sqrt(100 * std::log(100.0))));
}

TEST_CASE("norm estimates") {
  const SymMatrix c = SymMatrix::Constant(7, 7, 0.5);
  const Vec u = norm_estimates(c, neighborhoods(c, with_A(1.0)));
  for (Index i = 0; i < 7; ++i) CHECK(u(i) == doctest::Approx(0.25 * 7));

  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::random_strict, 25, 1.5, 4),
                                          std::nullopt, NoiseSpec::none(), 4);
  const Vec un = norm_estimates(inst.Y, neighborhoods(inst.Y, with_A(1.5)));
  for (Index i = 0; i < 25; ++i)
    CHECK(std::abs(un(i) - inst.X.row(i).squaredNorm()) <= 2 * 1.5 * 1.5);

  SymMatrix y(3, 3);
  y << 1, 0.5, -0.2, 0.5, 2, 0.1, -0.2, 0.1, 0.3;
  const auto nb = neighborhoods(y, with_A(1.0));
  const Vec u3 = norm_estimates(y, nb);
  for (Index i = 0; i < 3; ++i) {
    double best = -1e300;
    for (Index j : nb.sets[i]) {
      double ip = 0;
      for (Index k = 0; k < 3; ++k) ip += y(i, k) * y(j, k);
      best = std::max(best, ip);
    }
    CHECK(u3(i) == doctest::Approx(best));
  }
}

TEST_CASE("dhat_toeplitz") {
  const auto zero = dhat_toeplitz(SymMatrix::Constant(5, 5, 0.4), with_A(1.0));
  CHECK(zero.values().isZero(0));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::random_strict, 6, 1.0, s),
                                            std::nullopt, NoiseSpec::none(), s);
    const auto d = dhat_toeplitz(inst.Y, with_A(1.0));
    CHECK(valid_table(d));
    CHECK((d.values() - row_distances(inst.X)).cwiseAbs().maxCoeff() <= 2.0);
  }
}

TEST_CASE("dhat quasi-monotonicity with 2 eps slack") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Index n = 40;
    const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::random_strict, n, 1.0, s),
                                            std::nullopt, NoiseSpec::none(), s);
    const auto d = dhat_toeplitz(inst.Y, with_A(1.0));
    const double eps = (d.values() - row_distances(inst.X)).cwiseAbs().maxCoeff();
    const auto o = inst.pi_star.order();
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j)
        for (Index k = j; k < n; ++k) {
          CHECK(d(o[i], o[k]) >= d(o[i], o[j]) / std::sqrt(2.0) - 2 * eps);
          CHECK(d(o[k], o[i]) >= d(o[k], o[j]) / std::sqrt(2.0) - 2 * eps);
        }
  }
}

TEST_CASE("deviation bands with the frozen constants") {
  const Index n = 400;
  const double dn = static_cast<double>(n);
  const double quarter = std::pow(dn * std::log(dn), 0.25);
  double worst_t = 0, worst_l = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = gen_toeplitz_instance(make_theta(ThetaFamily::separated, n, 1.0, s),
                                         std::nullopt, NoiseSpec::gaussian(1), s);
    const auto dt = dhat_toeplitz(t.Y, with_A(1.0));
    worst_t = std::max(worst_t, (dt.values() - row_distances(t.X)).cwiseAbs().maxCoeff());
    if (s >= 25) continue;
    const auto l = gen_latent_instance(LatentSpec::box_sqrt_n(n, 1.0), NoiseSpec::gaussian(1), s);
    const auto dl = dhat_latent(l.Y, with_A(1.0));
    worst_l = std::max(worst_l, (dl.values() - row_distances(l.X)).cwiseAbs().maxCoeff());
  }
  MESSAGE("toeplitz ratio " << worst_t / (1 + quarter) << ", latent ratio " << worst_l / quarter);
  CHECK(worst_t <= constants::toeplitz_deviation * (1 + quarter));
  CHECK(worst_l <= constants::latent_deviation * quarter);
}

TEST_CASE("dhat_latent") {
  LatentSpec flat;
  flat.family = LatentSpec::Family::table;
  flat.table_breaks = {5.0};
  flat.table_values = {0.7};
  flat.n = 12;
  const auto c = gen_latent_instance(flat, NoiseSpec::none(), 1);
  CHECK(dhat_latent(c.Y, with_A(1.0)).values().isZero(0));

  // Box kernel on a regular design: ||X_i - X_j||^2 counts design points in
  // the symmetric difference of the two windows, n times its length up to
  // lattice rounding.
  const Index n = 200;
  const double w = 0.1, A = 1.0;
  LatentSpec box;
  box.width = w;
  box.A = A;
  box.n = n;
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const auto inst = gen_latent_instance(box, v, NoiseSpec::none(), 0);
  const auto d = dhat_latent(inst.Y, with_A(A));
  CHECK(valid_table(d));
  auto window = [&](double c) { return std::pair{std::max(0.0, c - w), std::min(1.0, c + w)}; };
  for (Index i = 0; i < n; i += 7)
    for (Index j = i + 1; j < n; j += 11) {
      const auto [a0, a1] = window(v(i));
      const auto [b0, b1] = window(v(j));
      const double overlap = std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
      const double sym_diff = (a1 - a0) + (b1 - b0) - 2 * overlap;
      const double closed = static_cast<double>(n) * A * A * sym_diff;
      CHECK(std::abs(inst.X.row(i).squaredNorm() + inst.X.row(j).squaredNorm() -
                     2 * inst.X.row(i).dot(inst.X.row(j)) - closed) <= 4 * A * A);
      CHECK(std::abs(d(i, j) * d(i, j) - closed) <= 10 * A * A);
    }
}

TEST_CASE("dhat_missing") {
  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::separated, 60, 1.0, 0),
                                          std::nullopt, NoiseSpec::gaussian(1), 6);
  const auto full = dhat_missing(inst.Y, SymMatrix::Ones(60, 60), with_A(1.0));
  CHECK(full.values() == dhat_toeplitz(inst.Y, with_A(1.0)).values());

  SymMatrix b(2, 2);
  b << 1, 1, 1, 0;
  CHECK(observed_fraction(b) == 0.75);
  CHECK_THROWS(observed_fraction(SymMatrix::Constant(2, 2, 0.5)));

  // Constant signal: the true distances vanish; the estimate stays inside
  // the missing-data epsilon band and shrinks relative to sqrt(n).
  double prev = 1e300;
  for (Index n : {100, 400, 1600}) {
    ModelInstance c;
    c.X = c.Y = SymMatrix::Ones(n, n);
    c = apply_mask(std::move(c), 0.5, 3);
    const auto d = dhat_missing(c.Y, *c.mask, with_A(1.0));
    const double dn = static_cast<double>(n);
    const double band = constants::toeplitz_deviation *
                        (1 + std::pow(0.5, -1.5) * std::pow(dn * std::log(dn), 0.25));
    CHECK(d.values().maxCoeff() <= band);
    const double rel = d.values().mean() / std::sqrt(dn);
    CHECK(rel < prev);
    prev = rel;
  }

  SymMatrix sparse = SymMatrix::Zero(50, 50);
  sparse(0, 0) = 1;
  CHECK_THROWS_AS(dhat_missing(SymMatrix::Zero(50, 50), sparse, with_A(1.0)),
                  InsufficientObservations);
}

TEST_CASE("dhat_supnorm") {
  SymMatrix y(3, 3);
  y << 1, 0.5, -0.2, 0.5, 2, 0.1, -0.2, 0.1, 0.3;
  const auto d = dhat_supnorm(y);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      double m = 0;
      for (Index k = 0; k < 3; ++k) m = std::max(m, std::abs(y(i, k) - y(j, k)));
      CHECK(d(i, j) == m);
    }
  SymMatrix twins = SymMatrix::Ones(3, 3);
  CHECK(dhat_supnorm(twins).values().isZero(0));
  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::separated, 15, 1.0, 0),
                                          std::nullopt, NoiseSpec::none(), 0);
  const auto dx = dhat_supnorm(inst.X);
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j)
      CHECK(dx(i, j) == (inst.X.row(i) - inst.X.row(j)).cwiseAbs().maxCoeff());
}

TEST_CASE("dhat_euclidean and options") {
  const auto inst = gen_toeplitz_instance(make_theta(ThetaFamily::separated, 10, 1.0, 0),
                                          std::nullopt, NoiseSpec::none(), 0);
  CHECK((dhat_euclidean(inst.X).values() - row_distances(inst.X)).norm() < 1e-12);
  EstimatorConfig cfg = with_A(1.0);
  cfg.exclude_diag = true;
  const auto nd = dhat_toeplitz(inst.Y, cfg);
  CHECK(valid_table(nd));
  cfg.c_eps = -1;
  CHECK_THROWS(cfg.validate());
  CHECK(estimator_from_string(to_string(Estimator::missing)) == Estimator::missing);
  CHECK(with_A(0).resolve_A(inst.Y) == doctest::Approx(estimate_A(inst.Y)));
}
