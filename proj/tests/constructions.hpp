#pragma once

#include "seriation/models.hpp"
#include "seriation/supnorm.hpp"

namespace construct {

using namespace seriation;

struct JumpCase {
  ModelInstance inst;
  double bound = 0;
  Adversary kind = Adversary::sign;
};

// theta decreasing by steps in [0.01, 0.05] except one drop of size `jump`
// at a random position; adversarial noise of size `bound`, kind cycling with
// the seed. at < 0 draws the position.
inline JumpCase one_jump(Index n, double bound, std::uint64_t seed, Index at = -1,
                         double jump = 1.0) {
  const CounterRng rng(seed);
  if (at < 0) at = 1 + static_cast<Index>(rng.bits(40, 0) % static_cast<std::uint64_t>(n - 2));
  Vec theta(n);
  theta(0) = 0;
  for (Index k = 1; k < n; ++k)
    theta(k) = theta(k - 1) - (k == at ? jump : 0.01 + 0.04 * rng.uniform(41, k));
  theta.array() -= theta.minCoeff();
  ToeplitzSpec spec{theta, theta(0)};
  JumpCase c;
  c.inst = gen_toeplitz_instance(spec, std::nullopt, NoiseSpec::none(), seed);
  c.bound = bound;
  c.kind = static_cast<Adversary>(seed % 3);
  const double cut = 0.5 * (theta(at - 1) + theta(at));
  c.inst.Y = c.inst.X + adversarial_noise(c.inst.X, bound, c.kind, seed, cut);
  return c;
}

inline double linf_ratio(const JumpCase& c, const Permutation& pi) {
  return oracle_linf_toeplitz(pi, c.inst.X, std::get<ToeplitzSpec>(c.inst.spec)) / c.bound;
}

}  // namespace construct
