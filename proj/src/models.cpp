#include "seriation/models.hpp"

#include <algorithm>
#include <numeric>

namespace seriation {

double LatentSpec::operator()(double x) const {
  const double ax = std::abs(x);
  switch (family) {
    case Family::box:
      return ax <= width ? A : 0.0;
    case Family::triangle:
      return ax >= width ? 0.0 : A * (1.0 - ax / width);
    case Family::gaussian:
      return A * std::exp(-0.5 * ax * ax / (width * width));
    case Family::table:
      for (std::size_t k = 0; k < table_breaks.size(); ++k)
        if (ax <= table_breaks[k]) return table_values[k];
      return 0.0;
  }
  return 0.0;
}

void LatentSpec::validate() const {
  if (n < 1) throw SeriationError("LatentSpec: n must be positive");
  if (!(A > 0)) throw SeriationError("LatentSpec: A must be positive");
  if (family == Family::table) {
    if (table_breaks.empty() || table_breaks.size() != table_values.size())
      throw SeriationError("LatentSpec: table breaks and values must match");
    for (std::size_t k = 0; k < table_values.size(); ++k) {
      if (table_values[k] < 0 || table_values[k] > A)
        throw SeriationError("LatentSpec: table value outside [0, A]");
      if (k > 0 && (table_values[k] > table_values[k - 1] ||
                    table_breaks[k] <= table_breaks[k - 1]))
        throw SeriationError("LatentSpec: table must be nonincreasing with increasing breaks");
    }
  } else if (!(width > 0)) {
    throw SeriationError("LatentSpec: width must be positive");
  }
}

LatentSpec LatentSpec::box_sqrt_n(Index n, double amplitude) {
  LatentSpec s;
  s.family = Family::box;
  s.A = amplitude;
  s.width = 1.0 / std::sqrt(static_cast<double>(n));
  s.n = n;
  return s;
}

SymMatrix ModelInstance::reference() const {
  if (auto* t = std::get_if<ToeplitzSpec>(&spec)) return toeplitz(t->theta);
  return latent_reference(X, positions);
}

double ModelInstance::oracle_loss(const Permutation& pi) const {
  if (auto* t = std::get_if<ToeplitzSpec>(&spec)) return oracle_loss_toeplitz(pi, X, *t);
  return oracle_loss_latent(pi, X, positions);
}

Permutation random_permutation(Index n, const CounterRng& rng, std::uint64_t stream) {
  std::vector<Index> map(n);
  std::iota(map.begin(), map.end(), Index{0});
  for (Index k = n - 1; k > 0; --k) {
    const auto j = static_cast<Index>(rng.bits(stream, static_cast<std::uint64_t>(k)) %
                                      static_cast<std::uint64_t>(k + 1));
    std::swap(map[k], map[j]);
  }
  return Permutation(std::move(map));
}

SymMatrix draw_noise(const SymMatrix& x, const NoiseSpec& noise, const CounterRng& rng) {
  const Index n = x.rows();
  SymMatrix e = SymMatrix::Zero(n, n);
  if (noise.kind == NoiseSpec::Kind::none) return e;
  auto draw = [&](Index i, Index j) {
    if (noise.kind == NoiseSpec::Kind::gaussian)
      return noise.sigma * rng.normal(streams::noise, static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(j));
    const double u = rng.uniform(streams::noise, static_cast<std::uint64_t>(i),
                                 static_cast<std::uint64_t>(j));
    return (u < x(i, j) ? 1.0 : 0.0) - x(i, j);
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      e(i, j) = draw(i, j);
      e(j, i) = (noise.asymmetric && j != i) ? draw(j, i) : e(i, j);
    }
  }
  return e;
}

namespace {

void check_noise(const NoiseSpec& noise, double A) {
  if (noise.kind == NoiseSpec::Kind::bernoulli && A > 1.0)
    throw SeriationError("bernoulli noise needs X in [0, 1], got A = " + std::to_string(A));
  if (noise.kind == NoiseSpec::Kind::gaussian && !(noise.sigma >= 0))
    throw SeriationError("gaussian noise needs sigma >= 0");
}

}  // namespace

ModelInstance gen_toeplitz_instance(const ToeplitzSpec& spec,
                                    const std::optional<Permutation>& pi,
                                    const NoiseSpec& noise, std::uint64_t seed) {
  spec.validate();
  check_noise(noise, spec.A);
  const CounterRng rng(seed);
  const Index n = spec.size();
  ModelInstance inst;
  inst.pi_star = pi ? *pi : random_permutation(n, rng);
  if (inst.pi_star.size() != n) throw SizeMismatch("gen_toeplitz_instance: permutation size");
  inst.X = permute(toeplitz(spec.theta), inst.pi_star.inverse());
  inst.Y = inst.X + draw_noise(inst.X, noise, rng);
  inst.spec = spec;
  inst.noise = noise;
  inst.seed = seed;
  return inst;
}

ModelInstance gen_latent_instance(const LatentSpec& spec, const NoiseSpec& noise,
                                  std::uint64_t seed) {
  const CounterRng rng(seed);
  Vec v(spec.n);
  for (Index i = 0; i < spec.n; ++i)
    v(i) = rng.uniform(streams::latent, static_cast<std::uint64_t>(i));
  return gen_latent_instance(spec, v, noise, seed);
}

ModelInstance gen_latent_instance(const LatentSpec& spec, const Vec& positions,
                                  const NoiseSpec& noise, std::uint64_t seed) {
  spec.validate();
  check_noise(noise, spec.A);
  if (positions.size() != spec.n) throw SizeMismatch("gen_latent_instance: positions size");
  const CounterRng rng(seed);
  const Index n = spec.n;
  ModelInstance inst;
  inst.positions = positions;
  inst.X.resize(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) inst.X(i, j) = spec(inst.positions(i) - inst.positions(j));
  inst.pi_star = ranking(inst.positions);
  inst.Y = inst.X + draw_noise(inst.X, noise, rng);
  inst.spec = spec;
  inst.noise = noise;
  inst.seed = seed;
  return inst;
}

ModelInstance apply_mask(ModelInstance inst, double lambda, std::uint64_t seed) {
  if (!(lambda > 0 && lambda <= 1))
    throw SeriationError("apply_mask: lambda must lie in (0, 1]");
  const CounterRng rng(seed);
  const Index n = inst.size();
  SymMatrix b(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      const double keep = rng.uniform(streams::mask, static_cast<std::uint64_t>(i),
                                      static_cast<std::uint64_t>(j)) < lambda
                              ? 1.0
                              : 0.0;
      b(i, j) = b(j, i) = keep;
    }
  inst.Y = inst.Y.cwiseProduct(b);
  inst.mask = std::move(b);
  inst.lambda = lambda;
  return inst;
}

double estimate_A(const SymMatrix& y) {
  if (y.rows() < 2) throw SeriationError("estimate_A: n must be at least 2");
  return y.maxCoeff() + std::sqrt(8.0 * std::log(static_cast<double>(y.rows())));
}

ToeplitzSpec make_theta(ThetaFamily family, Index n, double A, std::uint64_t seed) {
  ToeplitzSpec spec;
  spec.A = A;
  spec.theta.resize(n);
  const double dn = static_cast<double>(n);
  switch (family) {
    case ThetaFamily::separated:
      for (Index k = 0; k < n; ++k) spec.theta(k) = A * (dn - static_cast<double>(k)) / dn;
      break;
    case ThetaFamily::random_strict: {
      const CounterRng rng(seed);
      Vec inc(std::max<Index>(n - 1, 0));
      for (Index k = 0; k < inc.size(); ++k)
        inc(k) = 1.0 + 0.25 * rng.uniform(streams::theta, static_cast<std::uint64_t>(k));
      const double total = inc.sum();
      spec.theta(0) = A;
      for (Index k = 1; k < n; ++k) spec.theta(k) = spec.theta(k - 1) - A * inc(k - 1) / total;
      if (n > 1) spec.theta(n - 1) = 0.0;
      for (Index k = 0; k < n; ++k) spec.theta(k) = std::clamp(spec.theta(k), 0.0, A);
      break;
    }
  }
  return spec;
}

std::string to_string(LatentSpec::Family f) {
  switch (f) {
    case LatentSpec::Family::box: return "box";
    case LatentSpec::Family::triangle: return "triangle";
    case LatentSpec::Family::gaussian: return "gaussian";
    case LatentSpec::Family::table: return "table";
  }
  return "box";
}

LatentSpec::Family latent_family_from_string(const std::string& s) {
  if (s == "box") return LatentSpec::Family::box;
  if (s == "triangle") return LatentSpec::Family::triangle;
  if (s == "gaussian") return LatentSpec::Family::gaussian;
  if (s == "table") return LatentSpec::Family::table;
  throw SeriationError("unknown latent kernel family: " + s);
}

}  // namespace seriation
