#include "seriation/pines.hpp"

#include "seriation/models.hpp"
#include "seriation/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace seriation {

void PinesParams::validate() const {
  if (!(rho1 >= 0) || !(rho2 >= 0) || !(rho3 >= 0))
    throw SeriationError("PinesParams: radii must be nonnegative");
}

double PinesParams::entrywise_bound() const {
  if (!alpha || !epsilon) throw SeriationError("PinesParams: radii were not derived");
  return (2.0 * *alpha + 1.0) * rho1 + 2.0 * *alpha * *epsilon;
}

PinesParams default_params(double alpha, double delta, double epsilon) {
  if (!(alpha >= 1)) throw SeriationError("default_params: alpha must be at least 1");
  if (!(delta >= 0) || !(epsilon >= 0))
    throw SeriationError("default_params: delta and epsilon must be nonnegative");
  PinesParams p;
  p.rho3 = delta + epsilon;
  p.rho2 = alpha * delta + 2.0 * (1.0 + alpha) * epsilon;
  p.rho1 = alpha * alpha * delta + (2.0 * alpha * alpha + 3.0 * alpha + 2.0) * epsilon;
  p.alpha = alpha;
  p.delta = delta;
  p.epsilon = epsilon;
  return p;
}

PinesParams noiseless_params(const DistanceTable& d) {
  const Index n = d.size();
  struct Edge {
    double w;
    Index a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  double min_positive = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      edges.push_back({d(i, j), i, j});
      if (d(i, j) > 0) min_positive = std::min(min_positive, d(i, j));
    }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.w < y.w; });
  UnionFind uf(static_cast<std::size_t>(n));
  double bottleneck = 0;
  Index joined = 1;
  for (const auto& e : edges) {
    if (joined == n) break;
    if (uf.unite(static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b))) {
      bottleneck = e.w;
      ++joined;
    }
  }
  PinesParams p;
  p.rho1 = p.rho2 = std::isfinite(min_positive) ? 0.5 * min_positive : 0.0;
  p.rho3 = bottleneck;
  p.alpha = 1.0;
  p.epsilon = 0.0;
  return p;
}

PackingResult maximal_packing(const DistanceTable& d, double rho1) {
  const Index n = d.size();
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  PackingResult out;
  for (Index i = 0; i < n; ++i) {
    if (covered[i]) continue;
    std::vector<Index> cell;
    for (Index j = 0; j < n; ++j)
      if (!covered[j] && d(i, j) <= rho1) {
        cell.push_back(j);
        covered[j] = 1;
      }
    out.centers.push_back(i);
    out.cells.push_back(std::move(cell));
  }
  return out;
}

ComponentSplit split_components(const DistanceTable& d, Index center, double rho2,
                                double rho3, const std::vector<Index>& centers) {
  const Index n = d.size();
  std::vector<Index> vertices;
  for (Index j = 0; j < n; ++j)
    if (d(center, j) > rho2) vertices.push_back(j);
  UnionFind uf(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < vertices.size(); ++a)
    for (std::size_t b = a + 1; b < vertices.size(); ++b)
      if (d(vertices[a], vertices[b]) <= rho3)
        uf.unite(static_cast<std::size_t>(vertices[a]), static_cast<std::size_t>(vertices[b]));

  std::vector<char> in_graph(static_cast<std::size_t>(n), 0);
  for (Index v : vertices) in_graph[v] = 1;

  ComponentSplit out;
  out.center = center;
  out.empty_graph = vertices.empty();
  std::vector<std::size_t> roots;
  for (Index c : centers) {
    if (c == center) continue;
    if (!in_graph[c]) {
      out.outside.push_back(c);
      continue;
    }
    const std::size_t r = uf.find(static_cast<std::size_t>(c));
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      out.classes.push_back({c});
    } else {
      out.classes[static_cast<std::size_t>(it - roots.begin())].push_back(c);
    }
  }
  for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

std::string to_string(PinesFailure::Kind k) {
  switch (k) {
    case PinesFailure::Kind::too_many_components: return "too_many_components";
    case PinesFailure::Kind::no_extremal: return "no_extremal";
    case PinesFailure::Kind::no_continuation: return "no_continuation";
    case PinesFailure::Kind::ambiguous: return "ambiguous";
  }
  return "unknown";
}

namespace {

struct Splits {
  std::vector<ComponentSplit> per_center;
  std::vector<Index> counts;
};

Splits all_splits(const DistanceTable& d, const PackingResult& pk, double rho2, double rho3) {
  Splits s;
  for (Index c : pk.centers) {
    s.per_center.push_back(split_components(d, c, rho2, rho3, pk.centers));
    s.counts.push_back(static_cast<Index>(s.per_center.back().classes.size()));
  }
  return s;
}

}  // namespace

std::vector<Index> order_packing(const DistanceTable& d, const PackingResult& pk, double rho2,
                                 double rho3) {
  const auto splits = all_splits(d, pk, rho2, rho3);
  const std::size_t m = pk.centers.size();
  for (std::size_t k = 0; k < m; ++k)
    if (splits.counts[k] > 2)
      throw PinesFailure(PinesFailure::Kind::too_many_components,
                         "PINES: center " + std::to_string(pk.centers[k]) + " splits into " +
                             std::to_string(splits.counts[k]) + " components",
                         splits.counts, {});

  std::size_t start = m;
  for (std::size_t k = 0; k < m; ++k)
    if (splits.counts[k] <= 1) {
      start = k;
      break;
    }
  if (start == m)
    throw PinesFailure(PinesFailure::Kind::no_extremal, "PINES: no extremal center",
                       splits.counts, {});

  std::vector<char> in_prefix(static_cast<std::size_t>(d.size()), 0);
  std::vector<Index> order{pk.centers[start]};
  in_prefix[pk.centers[start]] = 1;
  std::vector<char> used(m, 0);
  used[start] = 1;

  while (order.size() < m) {
    std::size_t next = m;
    std::size_t found = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (used[k]) continue;
      for (const auto& cls : splits.per_center[k].classes) {
        if (cls.size() != order.size()) continue;
        if (std::all_of(cls.begin(), cls.end(), [&](Index c) { return in_prefix[c] != 0; })) {
          next = k;
          ++found;
          break;
        }
      }
    }
    if (found == 0)
      throw PinesFailure(PinesFailure::Kind::no_continuation,
                         "PINES: no center continues a prefix of length " +
                             std::to_string(order.size()),
                         splits.counts, order);
    if (found > 1)
      throw PinesFailure(PinesFailure::Kind::ambiguous,
                         "PINES: " + std::to_string(found) +
                             " centers continue a prefix of length " +
                             std::to_string(order.size()),
                         splits.counts, order);
    used[next] = 1;
    in_prefix[pk.centers[next]] = 1;
    order.push_back(pk.centers[next]);
  }
  return order;
}

SeriationOutput pines(const DistanceTable& d, const PinesParams& params) {
  params.validate();
  const Index n = d.size();
  if (n < 1) throw SeriationError("pines: empty distance table");
  const auto pk = maximal_packing(d, params.rho1);
  const auto order = order_packing(d, pk, params.rho2, params.rho3);

  std::vector<Index> slot_of(static_cast<std::size_t>(n), -1);
  Index q = 0;
  SeriationOutput out;
  for (Index c : order) {
    const auto k = static_cast<std::size_t>(
        std::find(pk.centers.begin(), pk.centers.end(), c) - pk.centers.begin());
    for (Index member : pk.cells[k]) slot_of[member] = q++;  // cells are ascending
  }
  out.pi_hat = Permutation(std::move(slot_of));
  out.packing_order = order;
  const auto splits = all_splits(d, pk, params.rho2, params.rho3);
  for (Index c : order) {
    const auto k = static_cast<std::size_t>(
        std::find(pk.centers.begin(), pk.centers.end(), c) - pk.centers.begin());
    out.component_counts.push_back(splits.counts[k]);
  }
  out.params = params;
  return out;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::toeplitz: return "toeplitz";
    case Model::latent: return "latent";
    case Model::missing: return "missing";
    case Model::supnorm: return "supnorm";
  }
  return "toeplitz";
}

Model model_from_string(const std::string& s) {
  if (s == "toeplitz") return Model::toeplitz;
  if (s == "latent") return Model::latent;
  if (s == "missing") return Model::missing;
  if (s == "supnorm") return Model::supnorm;
  throw SeriationError("unknown model: " + s);
}

PinesParams model_params(Model model, Index n, double A, const EstimatorConfig& cfg,
                         double lambda) {
  const double dn = static_cast<double>(n);
  const double quarter = std::pow(cfg.kappa * dn * std::log(dn), 0.25);
  const double sqrt2 = std::numbers::sqrt2;
  switch (model) {
    case Model::toeplitz:
      return default_params(sqrt2, sqrt2 * A, cfg.c_eps * (A + std::sqrt(A) * quarter));
    case Model::latent:
      return default_params(sqrt2, A * std::sqrt(std::log(dn)), cfg.c_eps * A * quarter);
    case Model::missing:
      return default_params(sqrt2, sqrt2 * A,
                            cfg.c_eps * (A + std::pow(lambda, -1.5) * std::sqrt(A) * quarter));
    case Model::supnorm:
      throw SeriationError("model_params: sup-norm radii depend on the noise bound");
  }
  return {};
}

namespace {

PinesParams scaled(const PinesParams& p, double f) {
  PinesParams s = p;
  s.rho1 *= f;
  s.rho2 *= f;
  s.rho3 *= f;
  if (s.delta) *s.delta *= f;
  if (s.epsilon) *s.epsilon *= f;
  return s;
}

}  // namespace

SeriationOutput seriate_distances(const DistanceTable& d, const PinesParams& base,
                                  const SeriateOptions& opts) {
  PinesParams params = opts.radii ? *opts.radii : base;
  for (Index attempt = 0;; ++attempt) {
    try {
      auto out = pines(d, params);
      out.escalations = attempt;
      if (attempt > 0) out.flags.push_back("escalated");
      return out;
    } catch (const PinesFailure&) {
      if (attempt >= opts.max_escalations) {
        if (opts.max_escalations == 0) throw;
        break;
      }
      params = scaled(params, opts.escalation_factor);
    }
  }
  // One cell holding everything always orders.
  PinesParams single = params;
  single.rho1 = d.values().maxCoeff() + 1.0;
  auto out = pines(d, single);
  out.escalations = opts.max_escalations + 1;
  out.flags.push_back("single_cell_fallback");
  return out;
}

SeriationOutput seriate(const SymMatrix& y, Model model, const SeriateOptions& opts) {
  check_square(y, "seriate");
  const Index n = y.rows();
  const auto& cfg = opts.estimator;
  const double A = cfg.resolve_A(y);
  EstimatorConfig resolved = cfg;
  resolved.A = A;
  switch (model) {
    case Model::toeplitz:
      return seriate_distances(dhat_toeplitz(y, resolved),
                               model_params(model, n, A, resolved), opts);
    case Model::latent:
      return seriate_distances(dhat_latent(y, resolved), model_params(model, n, A, resolved),
                               opts);
    case Model::missing: {
      if (!opts.mask) throw SeriationError("seriate: missing-data model needs a mask");
      const double lambda = observed_fraction(*opts.mask);
      return seriate_distances(dhat_missing(y, *opts.mask, resolved),
                               model_params(model, n, A, resolved, lambda), opts);
    }
    case Model::supnorm:
      if (!opts.radii)
        throw SeriationError("seriate: sup-norm model needs explicit radii (see supnorm_seriate)");
      return seriate_distances(dhat_supnorm(y), *opts.radii, opts);
  }
  return {};
}

}  // namespace seriation
