#include "seriation/experiment.hpp"

#include "seriation/distances.hpp"
#include "seriation/io.hpp"
#include "seriation/random.hpp"
#include "seriation/robinson.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace seriation {

void ExperimentPlan::validate() const {
  if (n_grid.empty()) throw SeriationError("plan: empty n grid");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end())
    throw SeriationError("plan: n grid must be strictly ascending");
  if (n_grid.front() < 2) throw SeriationError("plan: sizes must be at least 2");
  if (replicates < 1) throw SeriationError("plan: replicates must be at least 1");
  if (model == Model::supnorm) throw SeriationError("plan: sup-norm plans are not supported");
  if (algorithms.empty()) throw SeriationError("plan: no algorithms");
  static const std::set<std::string> known{"pines", "spectral", "ls-toeplitz", "ls-latent",
                                           "identity"};
  for (const auto& a : algorithms)
    if (!known.count(a)) throw SeriationError("plan: unknown algorithm " + a);
  if (threads < 1) throw SeriationError("plan: threads must be at least 1");
  if (model == Model::missing && !(lambda > 0 && lambda <= 1))
    throw SeriationError("plan: lambda must be in (0, 1]");
  estimator.validate();
}

std::uint64_t replicate_seed(std::uint64_t base, Index n, Index rep) {
  return base ^ mix64(mix64(static_cast<std::uint64_t>(n)) + static_cast<std::uint64_t>(rep));
}

ModelInstance plan_instance(const ExperimentPlan& plan, Index n, Index rep) {
  const auto seed = replicate_seed(plan.seed_base, n, rep);
  switch (plan.model) {
    case Model::latent: {
      LatentSpec k = plan.kernel;
      if (k.width <= 0) {
        const auto box = LatentSpec::box_sqrt_n(n, plan.A);
        k.width = box.width;
      }
      k.A = plan.A;
      k.n = n;
      return gen_latent_instance(k, plan.noise, seed);
    }
    case Model::missing: {
      auto inst = gen_toeplitz_instance(make_theta(plan.theta_family, n, plan.A, seed),
                                        std::nullopt, plan.noise, seed);
      return apply_mask(std::move(inst), plan.lambda, seed);
    }
    default:
      return gen_toeplitz_instance(make_theta(plan.theta_family, n, plan.A, seed), std::nullopt,
                                   plan.noise, seed);
  }
}

double entrywise_max(const ModelInstance& inst, const Permutation& pi) {
  const Index n = inst.size();
  const auto got = pi.order();
  const auto want = inst.pi_star.order();
  double fwd = 0, rev = 0;
  for (Index s = 0; s < n; ++s) {
    fwd = std::max(fwd, (inst.X.row(got[s]) - inst.X.row(want[s])).norm());
    rev = std::max(rev, (inst.X.row(got[n - 1 - s]) - inst.X.row(want[s])).norm());
  }
  return std::min(fwd, rev);
}

namespace {

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

Permutation run_one(const ExperimentPlan& plan, const ModelInstance& inst,
                    const std::string& algo, std::string& status) {
  const Index n = inst.size();
  if (algo == "identity") return Permutation::identity(n);
  if (algo == "spectral") {
    auto r = spectral_seriation(inst.Y);
    if (r.disconnected) status = "ok:disconnected";
    return r.pi_hat;
  }
  LSConfig ls = plan.ls;
  if (plan.known_A) ls.A = plan.A;
  if (algo == "ls-toeplitz") return ls_toeplitz(inst.Y, ls).pi_hat;
  if (algo == "ls-latent") return ls_latent(inst.Y, ls).pi_hat;
  SeriateOptions opts;
  opts.estimator = plan.estimator;
  if (plan.known_A) opts.estimator.A = plan.A;
  opts.max_escalations = plan.max_escalations;
  opts.mask = inst.mask;
  SeriationOutput out;
  if (inst.noise.kind == NoiseSpec::Kind::none && !inst.mask) {
    const auto d = dhat_euclidean(inst.Y);
    out = seriate_distances(d, noiseless_params(d), opts);
  } else {
    out = seriate(inst.Y, plan.model, opts);
  }
  if (std::find(out.flags.begin(), out.flags.end(), "single_cell_fallback") != out.flags.end())
    status = "ok:fallback";
  else if (out.escalations > 0)
    status = "ok:escalated";
  return out.pi_hat;
}

}  // namespace

ResultRow run_algorithm(const ExperimentPlan& plan, const ModelInstance& inst,
                        const std::string& algo) {
  ResultRow row;
  row.model = to_string(plan.model);
  row.n = inst.size();
  row.algo = algo;
  row.status = "ok";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto pi = run_one(plan, inst, algo, row.status);
    row.loss = plan.exact_l2 ? l2_loss(pi, inst.X) : inst.oracle_loss(pi);
    row.entrywise_max = entrywise_max(inst, pi);
  } catch (const SeriationError& e) {
    row.status = "fail:" + sanitize(e.what());
    row.loss = row.entrywise_max = std::nan("");
  }
  if (plan.timing)
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string format_row(const ResultRow& r) {
  std::ostringstream s;
  s << r.model << ',' << r.n << ',' << r.rep << ',' << r.algo << ',' << format_double(r.loss)
    << ',' << format_double(r.entrywise_max) << ',' << format_double(r.seconds) << ','
    << r.status;
  return s.str();
}

ResultRow parse_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) f.push_back(tok);
  if (f.size() != 8) throw IoError("result row has " + std::to_string(f.size()) + " fields");
  try {
    ResultRow r;
    r.model = f[0];
    r.n = std::stoll(f[1]);
    r.rep = std::stoll(f[2]);
    r.algo = f[3];
    r.loss = std::stod(f[4]);
    r.entrywise_max = std::stod(f[5]);
    r.seconds = std::stod(f[6]);
    r.status = f[7];
    return r;
  } catch (const std::exception&) {
    throw IoError("unparseable result row: " + line);
  }
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<ResultRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == result_header) {
      first = false;
      continue;
    }
    first = false;
    rows.push_back(parse_row(line));
  }
  return rows;
}

void write_results(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << result_header << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

std::vector<ResultRow> run_plan(const ExperimentPlan& plan) {
  plan.validate();
  const std::string model = to_string(plan.model);
  std::vector<ResultRow> existing;
  const bool resume = !plan.output.empty() && std::filesystem::exists(plan.output);
  if (resume) existing = read_results(plan.output);
  std::set<std::tuple<Index, Index, std::string>> have;
  for (const auto& r : existing)
    if (r.model == model) have.insert({r.n, r.rep, r.algo});

  struct Task {
    Index n, rep;
    std::vector<std::string> algos;
  };
  std::vector<Task> tasks;
  for (Index n : plan.n_grid)
    for (Index rep = 0; rep < plan.replicates; ++rep) {
      Task t{n, rep, {}};
      for (const auto& a : plan.algorithms)
        if (!have.count({n, rep, a})) t.algos.push_back(a);
      if (!t.algos.empty()) tasks.push_back(std::move(t));
    }

  std::vector<std::vector<ResultRow>> results(tasks.size());
  auto work = [&](std::size_t k) {
    const auto& t = tasks[k];
    std::vector<ResultRow> rows;
    try {
      const auto inst = plan_instance(plan, t.n, t.rep);
      for (const auto& a : t.algos) rows.push_back(run_algorithm(plan, inst, a));
    } catch (const SeriationError& e) {
      rows.clear();
      for (const auto& a : t.algos) {
        ResultRow r;
        r.model = model;
        r.n = t.n;
        r.algo = a;
        r.loss = r.entrywise_max = std::nan("");
        r.status = "fail:" + sanitize(e.what());
        rows.push_back(r);
      }
    }
    for (auto& r : rows) r.rep = t.rep;
    results[k] = std::move(rows);
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(plan.threads), tasks.size());
  if (workers <= 1) {
    for (std::size_t k = 0; k < tasks.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) work(k);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<ResultRow> fresh;
  for (auto& rs : results)
    for (auto& r : rs) fresh.push_back(std::move(r));
  if (!plan.output.empty()) {
    if (resume) {
      std::ofstream out(plan.output, std::ios::app);
      if (!out) throw IoError("cannot append to " + plan.output);
      for (const auto& r : fresh) out << format_row(r) << '\n';
    } else {
      write_results(plan.output, fresh);
    }
  }

  std::vector<ResultRow> all = existing;
  all.insert(all.end(), fresh.begin(), fresh.end());
  auto algo_rank = [&](const std::string& a) {
    const auto it = std::find(plan.algorithms.begin(), plan.algorithms.end(), a);
    return static_cast<std::size_t>(it - plan.algorithms.begin());
  };
  std::stable_sort(all.begin(), all.end(), [&](const ResultRow& x, const ResultRow& y) {
    return std::tuple(x.n, x.rep, algo_rank(x.algo), x.algo) <
           std::tuple(y.n, y.rep, algo_rank(y.algo), y.algo);
  });
  return all;
}

namespace {

struct Line {
  double slope, intercept, r2;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  l.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return l;
}

}  // namespace

RateFit fit_rate(const std::vector<ResultRow>& rows, const std::string& algo,
                 const std::string& model, Index bootstrap, std::uint64_t seed) {
  std::map<Index, std::vector<double>> groups;
  for (const auto& r : rows)
    if (r.algo == algo && r.model == model && r.status.rfind("ok", 0) == 0 &&
        std::isfinite(r.loss))
      groups[r.n].push_back(r.loss);

  RateFit fit;
  std::vector<std::vector<double>> kept;
  for (const auto& [n, losses] : groups) {
    double mean = 0;
    for (double v : losses) mean += v;
    mean /= static_cast<double>(losses.size());
    if (!(mean > 0)) {
      fit.warnings.push_back("n=" + std::to_string(n) + " dropped: zero mean loss");
      continue;
    }
    double var = 0;
    for (double v : losses) var += (v - mean) * (v - mean);
    const double m = static_cast<double>(losses.size());
    fit.ns.push_back(n);
    fit.means.push_back(mean);
    fit.stderrs.push_back(losses.size() > 1 ? std::sqrt(var / (m - 1) / m) : 0.0);
    kept.push_back(losses);
  }
  if (fit.ns.size() < 3)
    throw SeriationError("fit_rate: needs at least 3 sizes with positive loss, got " +
                         std::to_string(fit.ns.size()));

  std::vector<double> x, y;
  for (std::size_t k = 0; k < fit.ns.size(); ++k) {
    x.push_back(std::log(static_cast<double>(fit.ns[k])));
    y.push_back(std::log(fit.means[k]));
  }
  const auto line = ols(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;

  const CounterRng rng(seed);
  std::vector<double> slopes;
  for (Index b = 0; b < bootstrap; ++b) {
    std::vector<double> yb;
    std::uint64_t counter = 0;
    for (const auto& losses : kept) {
      double s = 0;
      for (std::size_t k = 0; k < losses.size(); ++k)
        s += losses[rng.bits(streams::bootstrap, static_cast<std::uint64_t>(b), counter++) %
                    losses.size()];
      yb.push_back(s > 0 ? std::log(s / static_cast<double>(losses.size())) : std::nan(""));
    }
    if (std::all_of(yb.begin(), yb.end(), [](double v) { return std::isfinite(v); }))
      slopes.push_back(ols(x, yb).slope);
  }
  if (slopes.size() > 1) {
    double mean = 0;
    for (double s : slopes) mean += s;
    mean /= static_cast<double>(slopes.size());
    double var = 0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    fit.slope_stderr = std::sqrt(var / static_cast<double>(slopes.size() - 1));
  }
  return fit;
}

void write_rate_svg(const std::string& path, const RateFit& fit, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  const double W = 480, H = 320, pad = 48;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (std::size_t k = 0; k < fit.ns.size(); ++k) {
    const double lx = std::log(static_cast<double>(fit.ns[k])), ly = std::log(fit.means[k]);
    x0 = std::min(x0, lx);
    x1 = std::max(x1, lx);
    y0 = std::min(y0, ly);
    y1 = std::max(y1, ly);
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double lx) { return pad + (lx - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double ly) { return H - pad - (ly - y0) / (y1 - y0) * (H - 2 * pad); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << pad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"13\">"
      << title << " slope " << format_double(fit.slope) << "</text>\n"
      << "<line x1=\"" << px(x0) << "\" y1=\"" << py(fit.intercept + fit.slope * x0) << "\" x2=\""
      << px(x1) << "\" y2=\"" << py(fit.intercept + fit.slope * x1)
      << "\" stroke=\"gray\"/>\n";
  for (std::size_t k = 0; k < fit.ns.size(); ++k)
    out << "<circle cx=\"" << px(std::log(static_cast<double>(fit.ns[k]))) << "\" cy=\""
        << py(std::log(fit.means[k])) << "\" r=\"4\" fill=\"black\"/>\n";
  out << "</svg>\n";
}

bool perfect_recovery_check(const ModelInstance& inst, const Permutation& pi_hat) {
  if (!inst.is_toeplitz())
    throw SeriationError("perfect_recovery_check: needs a Toeplitz instance");
  return oracle_loss_toeplitz(pi_hat, inst.X, std::get<ToeplitzSpec>(inst.spec)) == 0.0;
}

}  // namespace seriation
