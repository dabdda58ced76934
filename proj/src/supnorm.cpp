#include "seriation/supnorm.hpp"

#include "seriation/baselines.hpp"
#include "seriation/random.hpp"
#include "seriation/robinson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seriation {

GapSplit gap_split(const SymMatrix& y, double lambda) {
  check_square(y, "gap_split");
  if (!(lambda > 0)) throw SeriationError("gap_split: lambda must be positive");
  const Index n = y.rows();
  std::vector<double> v(y.data(), y.data() + y.size());
  std::sort(v.begin(), v.end());
  GapSplit out;
  out.lambda = lambda;
  out.indicator = SymMatrix::Ones(n, n);
  out.degenerate = true;
  out.threshold = -std::numeric_limits<double>::infinity();
  for (std::size_t k = v.size(); k-- > 1;)
    if (v[k] - v[k - 1] >= lambda) {
      out.threshold = v[k - 1];
      out.degenerate = false;
      break;
    }
  if (!out.degenerate)
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) out.indicator(i, j) = y(i, j) > out.threshold ? 1.0 : 0.0;
  return out;
}

namespace {

bool twin_rows(const SymMatrix& m, Index a, Index b) {
  for (Index k = 0; k < m.cols(); ++k)
    if (k != a && k != b && m(a, k) != m(b, k)) return false;
  return true;
}

}  // namespace

IndicatorOrder seriate_indicator(const SymMatrix& q) {
  check_square(q, "seriate_indicator");
  if (!is_symmetric(q)) throw SeriationError("seriate_indicator: indicator is not symmetric");
  const Index n = q.rows();
  IndicatorOrder out;
  auto everything_in_k = [&](const Permutation& p) {
    out.pi_hat = p;
    out.minus.clear();
    out.plus.clear();
    out.middle = p.order();
  };
  if (n < 3) {
    everything_in_k(Permutation::identity(n));
    return out;
  }
  const auto sp = spectral_seriation(q);
  out.flags = sp.flags;
  const SymMatrix ordered = permute(q, sp.pi_hat);
  if (!is_robinson(ordered)) {
    out.robinson = false;
    out.flags.push_back("indicator_not_robinson");
    everything_in_k(Permutation::identity(n));
    return out;
  }
  Index first = -1, last = -1;
  for (Index s = 0; s + 1 < n; ++s)
    if (twin_rows(ordered, s, s + 1)) {
      if (first < 0) first = s;
      last = s + 1;
    }
  out.pi_hat = sp.pi_hat;
  const auto order = sp.pi_hat.order();
  if (first < 0) {
    out.minus = order;
    return out;
  }
  out.minus.assign(order.begin(), order.begin() + first);
  out.middle.assign(order.begin() + first, order.begin() + last + 1);
  out.plus.assign(order.begin() + last + 1, order.end());
  return out;
}

PinesParams supnorm_params(double e) {
  if (!(e > 0)) throw SeriationError("supnorm_params: the noise bound must be positive");
  return default_params(1.0, supnorm_delta_factor * e, 2.0 * e);
}

SeriationOutput supnorm_seriate(const SymMatrix& y, double e, const SeriateOptions& opts) {
  check_square(y, "supnorm_seriate");
  const Index n = y.rows();
  const auto params = opts.radii ? *opts.radii : supnorm_params(e);
  const auto d = dhat_supnorm(y);
  const auto split = gap_split(y, 4.0 * e);
  if (split.degenerate) {
    auto out = seriate_distances(d, params, opts);
    out.flags.push_back("degenerate_split");
    return out;
  }
  const auto ind = seriate_indicator(split.indicator);
  if (ind.middle.size() == static_cast<std::size_t>(n)) {
    auto out = seriate_distances(d, params, opts);
    out.flags.insert(out.flags.end(), ind.flags.begin(), ind.flags.end());
    out.flags.push_back("k_is_everything");
    return out;
  }

  std::vector<Index> middle = ind.middle;
  SeriationOutput out;
  out.params = params;
  if (middle.size() > 1) {
    auto inner = seriate_distances(d.restrict(middle), params, opts);
    std::vector<Index> ordered;
    for (Index local : inner.pi_hat.order()) ordered.push_back(middle[local]);
    middle = std::move(ordered);
    out.packing_order.reserve(inner.packing_order.size());
    for (Index c : inner.packing_order) out.packing_order.push_back(ind.middle[c]);
    out.component_counts = inner.component_counts;
    out.escalations = inner.escalations;
    out.params = inner.params;
    out.flags = inner.flags;
    auto junction = [&](const std::vector<Index>& k) {
      double cost = 0;
      if (!ind.minus.empty()) cost += d(ind.minus.back(), k.front());
      if (!ind.plus.empty()) cost += d(k.back(), ind.plus.front());
      return cost;
    };
    std::vector<Index> flipped(middle.rbegin(), middle.rend());
    if (junction(flipped) < junction(middle)) middle = std::move(flipped);
  }
  std::vector<Index> order = ind.minus;
  order.insert(order.end(), middle.begin(), middle.end());
  order.insert(order.end(), ind.plus.begin(), ind.plus.end());
  out.pi_hat = Permutation::from_order(order);
  out.flags.insert(out.flags.end(), ind.flags.begin(), ind.flags.end());
  out.flags.push_back("split");
  return out;
}

std::string to_string(Adversary a) {
  switch (a) {
    case Adversary::sign: return "sign";
    case Adversary::uniform: return "uniform";
    case Adversary::gap_closing: return "gap_closing";
  }
  return "sign";
}

Adversary adversary_from_string(const std::string& s) {
  if (s == "sign") return Adversary::sign;
  if (s == "uniform") return Adversary::uniform;
  if (s == "gap_closing") return Adversary::gap_closing;
  throw SeriationError("unknown adversary: " + s);
}

SymMatrix adversarial_noise(const SymMatrix& x, double bound, Adversary kind,
                            std::uint64_t seed, double cut) {
  check_square(x, "adversarial_noise");
  const Index n = x.rows();
  const CounterRng rng(seed);
  SymMatrix e(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const auto a = static_cast<std::uint64_t>(i), b = static_cast<std::uint64_t>(j);
      double v = 0;
      switch (kind) {
        case Adversary::sign: v = (rng.bits(streams::adversary, a, b) & 1) ? bound : -bound; break;
        case Adversary::uniform: v = bound * (2 * rng.uniform(streams::adversary, a, b) - 1); break;
        case Adversary::gap_closing: v = x(i, j) > cut ? -bound : bound; break;
      }
      e(i, j) = e(j, i) = v;
    }
  return e;
}

}  // namespace seriation
