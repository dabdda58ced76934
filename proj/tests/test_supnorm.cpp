#include "constructions.hpp"
#include "seriation/distances.hpp"
#include "seriation/supnorm.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace seriation;

TEST_CASE("gap_split examples") {
  SymMatrix two(2, 2);
  two << 5, 0, 0, 5;
  auto s = gap_split(two, 2);
  CHECK_FALSE(s.degenerate);
  CHECK(s.indicator == SymMatrix::Identity(2, 2));

  SymMatrix four(3, 3);
  four << 5, 5.4, 0, 5.4, 5, 0.5, 0, 0.5, 5;
  s = gap_split(four, 2);
  CHECK(s.threshold == 0.5);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(s.indicator(i, j) == (four(i, j) >= 5 ? 1.0 : 0.0));

  s = gap_split(SymMatrix::Constant(4, 4, 3.0), 0.1);
  CHECK(s.degenerate);
  CHECK(s.indicator == SymMatrix::Ones(4, 4));
  CHECK_THROWS(gap_split(four, 0));
}

TEST_CASE("gap_split invariants on random matrices") {
  const CounterRng rng(11);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const Index n = 3 + static_cast<Index>(rng.bits(1, t) % 8);
    SymMatrix y(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = i; j < n; ++j)
        y(i, j) = y(j, i) = std::floor(10 * rng.uniform(2, t, i * n + j)) * 0.3;
    const double lambda = 0.2 + rng.uniform(3, t);
    const auto s = gap_split(y, lambda);
    CHECK(s.indicator == s.indicator.transpose());
    if (s.degenerate) continue;
    std::vector<double> in, out;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) (s.indicator(i, j) > 0 ? in : out).push_back(y(i, j));
    REQUIRE(!in.empty());
    REQUIRE(!out.empty());
    CHECK(*std::min_element(in.begin(), in.end()) >=
          lambda + *std::max_element(out.begin(), out.end()));
    std::sort(in.begin(), in.end());
    for (std::size_t k = 1; k < in.size(); ++k) CHECK(in[k] - in[k - 1] < lambda);
  }
}

TEST_CASE("seriate_indicator") {
  const Index n = 14;
  SymMatrix band(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) band(i, j) = std::abs(i - j) <= 2 ? 1.0 : 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_permutation(n, CounterRng(s));
    const SymMatrix q = permute(band, p.inverse());
    const auto r = seriate_indicator(q);
    CHECK(r.robinson);
    CHECK(r.middle.empty());
    CHECK((r.pi_hat == p || r.pi_hat == p.reversed()));
  }
  // Wide band: the middle rows all see everything and form K.
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) band(i, j) = std::abs(i - j) <= 9 ? 1.0 : 0.0;
  const auto w = seriate_indicator(band);
  std::set<Index> parts;
  for (auto* v : {&w.minus, &w.middle, &w.plus}) parts.insert(v->begin(), v->end());
  CHECK(parts.size() == static_cast<std::size_t>(n));
  CHECK(w.middle.size() == 6);
  CHECK(w.minus.size() == 4);
  CHECK(w.plus.size() == 4);

  CHECK(seriate_indicator(SymMatrix::Ones(8, 8)).middle.size() == 8);
  CHECK(seriate_indicator(SymMatrix::Identity(8, 8)).middle.size() == 8);
  SymMatrix bad = SymMatrix::Identity(4, 4);
  bad(0, 1) = 1;
  CHECK_THROWS(seriate_indicator(bad));
}

TEST_CASE("supnorm_seriate is exact when K is empty") {
  // A jump in the first half leaves a narrow band with distinct rows.
  for (std::uint64_t s = 0; s < 20; ++s) {
    for (bool noisy : {false, true}) {
      auto c = construct::one_jump(30, 0.1, s, 2 + static_cast<Index>(s % 13));
      if (!noisy) c.inst.Y = c.inst.X;
      const auto out = supnorm_seriate(c.inst.Y, 0.1);
      CHECK(construct::linf_ratio(c, out.pi_hat) == 0.0);
    }
  }
}

TEST_CASE("supnorm_seriate on one-jump adversarial constructions") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto c = construct::one_jump(40, 0.1, s);
    const auto out = supnorm_seriate(c.inst.Y, c.bound);
    CHECK(out.pi_hat.size() == 40);
    const double loss = oracle_linf_toeplitz(out.pi_hat, c.inst.X, std::get<ToeplitzSpec>(c.inst.spec));
    CHECK(loss <= supnorm_params(c.bound).entrywise_bound());
    const SymMatrix e = c.inst.Y - c.inst.X;
    CHECK(e.cwiseAbs().maxCoeff() <= 0.1 + 1e-15);
    CHECK(e == e.transpose());
  }
}

TEST_CASE("no gap reduces to plain PINES") {
  const Index n = 25;
  Vec theta(n);
  for (Index k = 0; k < n; ++k) theta(k) = 0.05 * static_cast<double>(n - 1 - k);
  const ToeplitzSpec spec{theta, theta(0)};
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto inst = gen_toeplitz_instance(spec, std::nullopt, NoiseSpec::none(), s);
    inst.Y = inst.X + adversarial_noise(inst.X, 0.1, Adversary::uniform, s);
    const auto out = supnorm_seriate(inst.Y, 0.1);
    const auto ref = seriate_distances(dhat_supnorm(inst.Y), supnorm_params(0.1), SeriateOptions{});
    CHECK(out.pi_hat == ref.pi_hat);
    CHECK(out.packing_order == ref.packing_order);
    CHECK(std::find(out.flags.begin(), out.flags.end(), "degenerate_split") != out.flags.end());
  }
}

TEST_CASE("adversary names") {
  for (auto a : {Adversary::sign, Adversary::uniform, Adversary::gap_closing})
    CHECK(adversary_from_string(to_string(a)) == a);
  CHECK_THROWS(adversary_from_string("loud"));
  CHECK_THROWS(supnorm_params(0));
}
