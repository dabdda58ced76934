#pragma once

#include "seriation/baselines.hpp"
#include "seriation/models.hpp"
#include "seriation/pines.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace seriation {

struct ExperimentPlan {
  /// toeplitz, latent or missing (a masked Toeplitz instance).
  Model model = Model::toeplitz;
  std::vector<Index> n_grid;
  Index replicates = 1;
  double A = 1.0;
  NoiseSpec noise = NoiseSpec::gaussian(1.0);
  ThetaFamily theta_family = ThetaFamily::separated;
  /// Kernel for the latent model; width <= 0 selects the 1/sqrt(n) box.
  LatentSpec kernel = [] {
    LatentSpec k;
    k.width = 0;
    return k;
  }();
  /// Observed fraction for the missing-data model.
  double lambda = 1.0;
  /// pines, spectral, ls-toeplitz, ls-latent, identity.
  std::vector<std::string> algorithms{"pines"};
  EstimatorConfig estimator;
  /// The signal bound is handed to the estimator instead of estimated.
  bool known_A = true;
  Index max_escalations = 60;
  LSConfig ls;
  std::uint64_t seed_base = 0;
  std::string output;
  Index threads = 1;
  /// Record wall-clock time; off keeps reruns byte-identical.
  bool timing = false;
  /// Dykstra l2 loss instead of the oracle surrogate.
  bool exact_l2 = false;

  void validate() const;
};

struct ResultRow {
  std::string model;
  Index n = 0;
  Index rep = 0;
  std::string algo;
  double loss = 0;
  double entrywise_max = 0;
  double seconds = 0;
  std::string status;  // "ok" or "fail:<reason>"
};

inline constexpr const char* result_header = "model,n,rep,algo,loss,entrywise_max,seconds,status";

std::uint64_t replicate_seed(std::uint64_t base, Index n, Index rep);

/// Instance for one (n, rep) cell of a plan.
ModelInstance plan_instance(const ExperimentPlan& plan, Index n, Index rep);

/// Runs one algorithm on an instance; failures become status strings.
ResultRow run_algorithm(const ExperimentPlan& plan, const ModelInstance& inst,
                        const std::string& algo);

/// Runs every missing (n, rep, algo) cell. With an output path, existing rows
/// are kept and new ones appended. Returns the full table sorted by
/// (n, rep, algo position in the plan).
std::vector<ResultRow> run_plan(const ExperimentPlan& plan);

std::string format_row(const ResultRow& r);
ResultRow parse_row(const std::string& line);
std::vector<ResultRow> read_results(const std::string& path);
void write_results(const std::string& path, const std::vector<ResultRow>& rows);

/// max over slots of ||X_a - X_b|| between the object placed there and the
/// true one, for the better of the two orientations.
double entrywise_max(const ModelInstance& inst, const Permutation& pi);

struct RateFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  double slope_stderr = 0;
  std::vector<Index> ns;
  std::vector<double> means;
  std::vector<double> stderrs;
  std::vector<std::string> warnings;
};

/// OLS of log(mean loss) on log n over successful rows of one algorithm.
RateFit fit_rate(const std::vector<ResultRow>& rows, const std::string& algo,
                 const std::string& model, Index bootstrap = 200,
                 std::uint64_t seed = 0x5eed);

/// Minimal log-log scatter of a fit.
void write_rate_svg(const std::string& path, const RateFit& fit, const std::string& title);

/// P_hat . X == T(theta) exactly.
bool perfect_recovery_check(const ModelInstance& inst, const Permutation& pi_hat);

}  // namespace seriation
