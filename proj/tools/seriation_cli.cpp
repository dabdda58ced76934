// Command-line front end for the seriation library.

#include "seriation/baselines.hpp"
#include "seriation/experiment.hpp"
#include "seriation/io.hpp"
#include "seriation/models.hpp"
#include "seriation/pines.hpp"
#include "seriation/robinson.hpp"
#include "seriation/supnorm.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace seriation;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string config;

  std::uint64_t resolve_seed() const {
    if (seed) return *seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::string path(const std::string& name) const {
    fs::create_directories(out);
    return (fs::path(out) / name).string();
  }
};

void print_seed(std::uint64_t seed) { std::cout << "seed=" << seed << '\n'; }

// Config entries fill options that were not given on the command line.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  for (const auto& [key, value] : read_key_values(path)) {
    CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt) throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") opt->add_result("true");
      else if (value == "false" || value == "0") continue;
      else throw CLI::ValidationError("--config", "flag '" + key + "' needs true or false");
    } else {
      std::istringstream ss(value);
      for (std::string tok; ss >> tok;) opt->add_result(tok);
    }
    opt->run_callback();
  }
}

struct GenArgs {
  std::string model = "toeplitz";
  Index n = 50;
  double A = 1.0;
  std::string family = "random_strict";
  std::string kernel = "box";
  double width = 0;
  std::string noise = "gaussian";
  double sigma = 1.0;
  bool asymmetric = false;
  double lambda = 1.0;
  double einf = 0;
  std::string adversary = "sign";
};

void cmd_gen(const Globals& g, const GenArgs& a) {
  const auto seed = g.resolve_seed();
  print_seed(seed);
  NoiseSpec noise;
  if (a.noise == "gaussian") noise = NoiseSpec::gaussian(a.sigma);
  else if (a.noise == "bernoulli") noise = NoiseSpec::bernoulli();
  else if (a.noise != "none") throw SeriationError("unknown noise: " + a.noise);
  noise.asymmetric = a.asymmetric;

  ModelInstance inst;
  KeyValues meta{{"model", a.model}, {"n", std::to_string(a.n)}, {"A", format_double(a.A)},
                 {"seed", std::to_string(seed)}, {"noise", a.noise},
                 {"sigma", format_double(a.sigma)}};
  if (a.model == "toeplitz") {
    const auto family = a.family == "separated" ? ThetaFamily::separated
                        : a.family == "random_strict"
                            ? ThetaFamily::random_strict
                            : throw SeriationError("unknown theta family: " + a.family);
    inst = gen_toeplitz_instance(make_theta(family, a.n, a.A, seed), std::nullopt, noise, seed);
    const auto& theta = std::get<ToeplitzSpec>(inst.spec).theta;
    write_matrix_csv(g.path("theta.csv"), SymMatrix(theta.transpose()));
    meta["family"] = a.family;
  } else if (a.model == "latent") {
    LatentSpec k;
    k.family = latent_family_from_string(a.kernel);
    k.A = a.A;
    k.n = a.n;
    k.width = a.width > 0 ? a.width : LatentSpec::box_sqrt_n(a.n, a.A).width;
    inst = gen_latent_instance(k, noise, seed);
    write_matrix_csv(g.path("V.csv"), SymMatrix(inst.positions.transpose()));
    meta["kernel"] = a.kernel;
    meta["width"] = format_double(k.width);
  } else {
    throw SeriationError("gen: model must be toeplitz or latent");
  }
  if (a.einf > 0) {
    const auto kind = adversary_from_string(a.adversary);
    const double cut = 0.5 * (inst.X.maxCoeff() + inst.X.minCoeff());
    inst.Y = inst.X + adversarial_noise(inst.X, a.einf, kind, seed, cut);
    meta["einf"] = format_double(a.einf);
    meta["adversary"] = a.adversary;
  }
  if (a.lambda < 1) {
    inst = apply_mask(std::move(inst), a.lambda, seed);
    write_matrix_csv(g.path("B.csv"), *inst.mask);
    meta["lambda"] = format_double(a.lambda);
  }
  write_matrix_csv(g.path("X.csv"), inst.X);
  write_matrix_csv(g.path("Y.csv"), inst.Y);
  write_permutation(g.path("pi_star.txt"), inst.pi_star);
  write_key_values(g.path("meta.txt"), meta);
}

struct DistArgs {
  std::string in = "Y.csv";
  std::string mask;
  std::string estimator = "toeplitz";
  double A = 0, c_nbhd = 2.0, c_eps = 1.0, kappa = 1.0;
  bool exclude_diag = false;
};

EstimatorConfig estimator_config(double A, double c_nbhd, double c_eps, double kappa,
                                 bool exclude_diag) {
  EstimatorConfig cfg;
  cfg.A = A;
  cfg.c_nbhd = c_nbhd;
  cfg.c_eps = c_eps;
  cfg.kappa = kappa;
  cfg.exclude_diag = exclude_diag;
  cfg.validate();
  return cfg;
}

void cmd_dist(const Globals& g, const DistArgs& a) {
  const auto y = read_matrix_csv(a.in);
  const auto cfg = estimator_config(a.A, a.c_nbhd, a.c_eps, a.kappa, a.exclude_diag);
  DistanceTable d;
  switch (estimator_from_string(a.estimator)) {
    case Estimator::toeplitz: d = dhat_toeplitz(y, cfg); break;
    case Estimator::latent: d = dhat_latent(y, cfg); break;
    case Estimator::missing:
      if (a.mask.empty()) throw SeriationError("dist: the missing estimator needs --mask");
      d = dhat_missing(y, read_matrix_csv(a.mask), cfg);
      break;
    case Estimator::supnorm: d = dhat_supnorm(y); break;
    case Estimator::euclidean: d = dhat_euclidean(y); break;
  }
  write_matrix_csv(g.path("dhat.csv"), d.values());
}

struct SeriateArgs {
  std::string in = "Y.csv";
  std::string mask;
  std::string model = "toeplitz";
  std::optional<double> rho1, rho2, rho3;
  double A = 0, c_nbhd = 2.0, c_eps = 1.0, kappa = 1.0;
  bool exclude_diag = false;
  Index max_escalations = 60;
  double einf = 0;
};

KeyValues diagnostics(const SeriationOutput& out) {
  KeyValues kv{{"rho1", format_double(out.params.rho1)},
               {"rho2", format_double(out.params.rho2)},
               {"rho3", format_double(out.params.rho3)},
               {"centers", std::to_string(out.packing_order.size())},
               {"escalations", std::to_string(out.escalations)}};
  std::string counts, order, flags;
  for (Index c : out.component_counts) counts += (counts.empty() ? "" : " ") + std::to_string(c);
  for (Index c : out.packing_order) order += (order.empty() ? "" : " ") + std::to_string(c + 1);
  for (const auto& f : out.flags) flags += (flags.empty() ? "" : " ") + f;
  kv["component_counts"] = counts;
  kv["packing_order"] = order;
  kv["flags"] = flags;
  if (out.params.alpha) kv["alpha"] = format_double(*out.params.alpha);
  if (out.params.delta) kv["delta"] = format_double(*out.params.delta);
  if (out.params.epsilon) kv["epsilon"] = format_double(*out.params.epsilon);
  return kv;
}

void cmd_seriate(const Globals& g, const SeriateArgs& a) {
  const auto y = read_matrix_csv(a.in);
  SeriateOptions opts;
  opts.estimator = estimator_config(a.A, a.c_nbhd, a.c_eps, a.kappa, a.exclude_diag);
  opts.max_escalations = a.max_escalations;
  if (!a.mask.empty()) opts.mask = read_matrix_csv(a.mask);
  const auto model = model_from_string(a.model);
  if (a.rho1 || a.rho2 || a.rho3) {
    if (!(a.rho1 && a.rho2 && a.rho3))
      throw SeriationError("seriate: --rho1, --rho2 and --rho3 go together");
    PinesParams p;
    p.rho1 = *a.rho1;
    p.rho2 = *a.rho2;
    p.rho3 = *a.rho3;
    opts.radii = p;
  } else if (model == Model::supnorm) {
    if (!(a.einf > 0)) throw SeriationError("seriate: the supnorm model needs --einf or radii");
    opts.radii = supnorm_params(a.einf);
  }
  const auto out = seriate(y, model, opts);
  write_permutation(g.path("pi_hat.txt"), out.pi_hat);
  write_key_values(g.path("diagnostics.txt"), diagnostics(out));
  std::cout << format_permutation(out.pi_hat) << '\n';
}

struct BaselineArgs {
  std::string in = "Y.csv";
  std::string algo = "spectral";
  double A = 0, grid_step = 0, v_step = 0.5, phi_step = 0.5;
  bool snap = false;
  Index max_n = 8;
};

void cmd_baseline(const Globals& g, const BaselineArgs& a) {
  const auto y = read_matrix_csv(a.in);
  LSConfig cfg;
  cfg.A = a.A;
  cfg.grid_step = a.grid_step;
  cfg.snap_to_grid = a.snap;
  cfg.max_n = a.max_n;
  cfg.v_step = a.v_step;
  cfg.phi_step = a.phi_step;
  Permutation pi;
  KeyValues kv{{"algo", a.algo}};
  if (a.algo == "spectral") {
    const auto r = spectral_seriation(y);
    pi = r.pi_hat;
    kv["disconnected"] = r.disconnected ? "true" : "false";
    kv["degenerate"] = r.degenerate ? "true" : "false";
    kv["lambda2"] = format_double(r.eigenvalues(1));
  } else if (a.algo == "ls-toeplitz") {
    const auto r = ls_toeplitz(y, cfg);
    pi = r.pi_hat;
    kv["objective"] = format_double(r.objective);
    write_matrix_csv(g.path("theta_hat.csv"), SymMatrix(r.theta_hat.transpose()));
  } else if (a.algo == "ls-latent") {
    const auto r = ls_latent(y, cfg);
    pi = r.pi_hat;
    kv["objective"] = format_double(r.objective);
    write_matrix_csv(g.path("V_hat.csv"), SymMatrix(r.v_hat.transpose()));
    write_matrix_csv(g.path("phi_hat.csv"), SymMatrix(r.phi_hat.transpose()));
  } else {
    throw SeriationError("baseline: unknown algorithm " + a.algo);
  }
  write_permutation(g.path("pi_hat.txt"), pi);
  write_key_values(g.path("diagnostics.txt"), kv);
  std::cout << format_permutation(pi) << '\n';
}

struct SupnormArgs {
  std::string in = "Y.csv";
  double einf = 0;
  Index max_escalations = 60;
};

void cmd_supnorm(const Globals& g, const SupnormArgs& a) {
  const auto y = read_matrix_csv(a.in);
  SeriateOptions opts;
  opts.max_escalations = a.max_escalations;
  const auto out = supnorm_seriate(y, a.einf, opts);
  write_permutation(g.path("pi_hat.txt"), out.pi_hat);
  write_key_values(g.path("diagnostics.txt"), diagnostics(out));
  std::cout << format_permutation(out.pi_hat) << '\n';
}

struct ProjectArgs {
  std::string in = "M.csv";
  std::string perm;
  std::string cone = "full";
  double tol = 1e-8;
  Index max_iter = 0;
};

void cmd_project(const Globals& g, const ProjectArgs& a) {
  auto m = read_matrix_csv(a.in);
  if (!a.perm.empty()) m = permute(m, read_permutation(a.perm));
  RobinsonFlags flags;
  if (a.cone == "relaxed") flags.symmetric_cone = false;
  else if (a.cone != "full") throw SeriationError("project: cone must be full or relaxed");
  const auto r = project_robinson(m, flags, a.tol, a.max_iter);
  write_matrix_csv(g.path("projected.csv"), r.matrix);
  const KeyValues kv{{"iterations", std::to_string(r.iterations)},
                     {"residual", format_double(r.residual)},
                     {"distance", format_double((m - r.matrix).norm())}};
  write_key_values(g.path("projection.txt"), kv);
  std::cout << "distance=" << kv.at("distance") << '\n';
}

struct ExperimentArgs {
  std::string model = "toeplitz";
  std::vector<Index> sizes{100, 200, 400, 800};
  Index reps = 50;
  std::vector<std::string> algos{"pines"};
  double A = 1.0, sigma = 1.0, lambda = 1.0, c_eps = 1.0, c_nbhd = 2.0, width = 0;
  std::string family = "separated";
  std::string kernel = "box";
  std::string noise = "gaussian";
  std::string results = "results.csv";
  Index threads = 1;
  Index max_escalations = 60;
  bool timing = false;
  bool exact_l2 = false;
  bool estimate_A = false;
};

void cmd_experiment(const Globals& g, const ExperimentArgs& a) {
  ExperimentPlan plan;
  plan.model = model_from_string(a.model);
  plan.n_grid = a.sizes;
  plan.replicates = a.reps;
  plan.algorithms = a.algos;
  plan.A = a.A;
  plan.noise = a.noise == "none" ? NoiseSpec::none() : NoiseSpec::gaussian(a.sigma);
  plan.theta_family =
      a.family == "random_strict" ? ThetaFamily::random_strict : ThetaFamily::separated;
  plan.kernel.family = latent_family_from_string(a.kernel);
  plan.kernel.width = a.width;
  plan.lambda = a.lambda;
  plan.estimator.c_eps = a.c_eps;
  plan.estimator.c_nbhd = a.c_nbhd;
  plan.known_A = !a.estimate_A;
  plan.max_escalations = a.max_escalations;
  plan.seed_base = g.resolve_seed();
  plan.output = g.path(a.results);
  plan.threads = a.threads;
  plan.timing = a.timing;
  plan.exact_l2 = a.exact_l2;
  print_seed(plan.seed_base);
  const auto rows = run_plan(plan);
  Index failed = 0;
  for (const auto& r : rows) failed += r.status.rfind("fail", 0) == 0;
  std::cout << "rows=" << rows.size() << " failed=" << failed << " file=" << plan.output << '\n';
}

struct FitArgs {
  std::string in = "results.csv";
  std::string algo = "pines";
  std::string model = "toeplitz";
  std::string svg;
};

void cmd_fit(const Globals& g, const FitArgs& a) {
  const auto fit = fit_rate(read_results(a.in), a.algo, a.model);
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
  KeyValues kv{{"slope", format_double(fit.slope)},
               {"slope_stderr", format_double(fit.slope_stderr)},
               {"intercept", format_double(fit.intercept)},
               {"r2", format_double(fit.r2)}};
  for (std::size_t k = 0; k < fit.ns.size(); ++k) {
    kv["mean_n" + std::to_string(fit.ns[k])] = format_double(fit.means[k]);
    kv["stderr_n" + std::to_string(fit.ns[k])] = format_double(fit.stderrs[k]);
  }
  write_key_values(g.path("fit.txt"), kv);
  if (!a.svg.empty()) write_rate_svg(g.path(a.svg), fit, a.algo + " / " + a.model);
  std::cout << "slope=" << kv["slope"] << " stderr=" << kv["slope_stderr"] << " r2=" << kv["r2"]
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seriation of noisy permuted Robinson matrices"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (drawn and printed when absent)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--config", g.config, "key=value file; command-line flags win");

  GenArgs gen;
  auto* sg = app.add_subcommand("gen", "Generate a model instance");
  sg->add_option("--model", gen.model)->check(CLI::IsMember({"toeplitz", "latent"}));
  sg->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  sg->add_option("--A", gen.A);
  sg->add_option("--family", gen.family, "separated or random_strict");
  sg->add_option("--kernel", gen.kernel, "box, triangle or gaussian");
  sg->add_option("--width", gen.width, "Kernel width; 0 selects 1/sqrt(n)");
  sg->add_option("--noise", gen.noise)->check(CLI::IsMember({"none", "gaussian", "bernoulli"}));
  sg->add_option("--sigma", gen.sigma);
  sg->add_flag("--asymmetric", gen.asymmetric);
  sg->add_option("--lambda", gen.lambda, "Observed fraction; below 1 writes a mask");
  sg->add_option("--einf", gen.einf, "Replace the noise by adversarial noise of this size");
  sg->add_option("--adversary", gen.adversary)
      ->check(CLI::IsMember({"sign", "uniform", "gap_closing"}));

  DistArgs dist;
  auto* sd = app.add_subcommand("dist", "Estimate row distances");
  sd->add_option("--in", dist.in);
  sd->add_option("--mask", dist.mask);
  sd->add_option("--estimator", dist.estimator)
      ->check(CLI::IsMember({"toeplitz", "latent", "missing", "supnorm", "euclidean"}));
  sd->add_option("--A", dist.A);
  sd->add_option("--c-nbhd", dist.c_nbhd);
  sd->add_option("--c-eps", dist.c_eps);
  sd->add_option("--kappa", dist.kappa);
  sd->add_flag("--exclude-diag", dist.exclude_diag);

  SeriateArgs ser;
  auto* ss = app.add_subcommand("seriate", "Order Y with PINES");
  ss->add_option("--in", ser.in);
  ss->add_option("--mask", ser.mask);
  ss->add_option("--model", ser.model)
      ->check(CLI::IsMember({"toeplitz", "latent", "missing", "supnorm"}));
  ss->add_option("--rho1", ser.rho1);
  ss->add_option("--rho2", ser.rho2);
  ss->add_option("--rho3", ser.rho3);
  ss->add_option("--A", ser.A);
  ss->add_option("--c-nbhd", ser.c_nbhd);
  ss->add_option("--c-eps", ser.c_eps);
  ss->add_option("--kappa", ser.kappa);
  ss->add_flag("--exclude-diag", ser.exclude_diag);
  ss->add_option("--max-escalations", ser.max_escalations);
  ss->add_option("--einf", ser.einf);

  BaselineArgs base;
  auto* sb = app.add_subcommand("baseline", "Spectral or exhaustive least-squares ordering");
  sb->add_option("--in", base.in);
  sb->add_option("--algo", base.algo)
      ->check(CLI::IsMember({"spectral", "ls-toeplitz", "ls-latent"}));
  sb->add_option("--A", base.A);
  sb->add_option("--grid-step", base.grid_step);
  sb->add_flag("--snap", base.snap);
  sb->add_option("--max-n", base.max_n);
  sb->add_option("--v-step", base.v_step);
  sb->add_option("--phi-step", base.phi_step);

  SupnormArgs sup;
  auto* su = app.add_subcommand("supnorm", "Sup-norm seriation under bounded noise");
  su->add_option("--in", sup.in);
  su->add_option("--einf", sup.einf)->required();
  su->add_option("--max-escalations", sup.max_escalations);

  ProjectArgs proj;
  auto* sp = app.add_subcommand("project", "Project onto the Robinson cone");
  sp->add_option("--in", proj.in);
  sp->add_option("--perm", proj.perm, "Apply this permutation first");
  sp->add_option("--cone", proj.cone)->check(CLI::IsMember({"full", "relaxed"}));
  sp->add_option("--tol", proj.tol);
  sp->add_option("--max-iter", proj.max_iter);

  ExperimentArgs exp;
  auto* se = app.add_subcommand("experiment", "Run a replicate plan and write a CSV");
  se->add_option("--model", exp.model)->check(CLI::IsMember({"toeplitz", "latent", "missing"}));
  se->add_option("--sizes", exp.sizes);
  se->add_option("--reps", exp.reps);
  se->add_option("--algos", exp.algos);
  se->add_option("--A", exp.A);
  se->add_option("--sigma", exp.sigma);
  se->add_option("--noise", exp.noise)->check(CLI::IsMember({"none", "gaussian"}));
  se->add_option("--lambda", exp.lambda);
  se->add_option("--family", exp.family)->check(CLI::IsMember({"separated", "random_strict"}));
  se->add_option("--kernel", exp.kernel);
  se->add_option("--width", exp.width);
  se->add_option("--c-eps", exp.c_eps);
  se->add_option("--c-nbhd", exp.c_nbhd);
  se->add_option("--results", exp.results);
  se->add_option("--threads", exp.threads);
  se->add_option("--max-escalations", exp.max_escalations);
  se->add_flag("--timing", exp.timing);
  se->add_flag("--exact-l2", exp.exact_l2);
  se->add_flag("--estimate-A", exp.estimate_A);

  FitArgs fit;
  auto* sf = app.add_subcommand("fit-rate", "Log-log slope of mean loss against n");
  sf->add_option("--in", fit.in);
  sf->add_option("--algo", fit.algo);
  sf->add_option("--model", fit.model);
  sf->add_option("--svg", fit.svg);

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    apply_config(app, sub, g.config);
    if (sub == sg) cmd_gen(g, gen);
    else if (sub == sd) cmd_dist(g, dist);
    else if (sub == ss) cmd_seriate(g, ser);
    else if (sub == sb) cmd_baseline(g, base);
    else if (sub == su) cmd_supnorm(g, sup);
    else if (sub == sp) cmd_project(g, proj);
    else if (sub == se) cmd_experiment(g, exp);
    else if (sub == sf) cmd_fit(g, fit);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
