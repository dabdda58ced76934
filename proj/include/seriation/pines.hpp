#pragma once

#include "seriation/distances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seriation {

/// Connectivity radii. rho1: packing, rho2: removed ball, rho3: graph edges.
struct PinesParams {
  double rho1 = 0;
  double rho2 = 0;
  double rho3 = 0;
  /// Set when the radii come from (alpha, delta, epsilon).
  std::optional<double> alpha, delta, epsilon;

  void validate() const;
  /// Entrywise guarantee (2 alpha + 1) rho1 + 2 alpha epsilon; requires a
  /// derived parameter set.
  double entrywise_bound() const;
};

/// rho3 = delta + eps, rho2 = alpha delta + 2 (1 + alpha) eps,
/// rho1 = alpha^2 delta + (2 alpha^2 + 3 alpha + 2) eps.
PinesParams default_params(double alpha, double delta, double epsilon);

/// Radii for an exact (noise-free) distance: every distinct row is its own
/// packing cell and the graph radius is the bottleneck edge of a minimum
/// spanning tree, the smallest radius under which the graph is connected.
PinesParams noiseless_params(const DistanceTable& d);

struct PackingResult {
  std::vector<Index> centers;             // ascending
  std::vector<std::vector<Index>> cells;  // cells[k] belongs to centers[k]
};

/// Greedy maximal rho1-packing, lowest uncovered index first.
PackingResult maximal_packing(const DistanceTable& d, double rho1);

/// Classes of P \ {center} induced by connectivity in the rho3-graph on
/// { j : d(center, j) > rho2 }. Centers outside that vertex set belong to no
/// class and are listed in `outside`.
struct ComponentSplit {
  Index center = 0;
  std::vector<std::vector<Index>> classes;  // each sorted, classes sorted by first element
  std::vector<Index> outside;
  /// No vertex survives the ball removal.
  bool empty_graph = false;
};

ComponentSplit split_components(const DistanceTable& d, Index center, double rho2,
                                double rho3, const std::vector<Index>& centers);

class PinesFailure : public SeriationError {
 public:
  enum class Kind { too_many_components, no_extremal, no_continuation, ambiguous };

  PinesFailure(Kind kind, std::string what, std::vector<Index> component_counts,
               std::vector<Index> ordered_prefix)
      : SeriationError(std::move(what)),
        kind_(kind),
        counts_(std::move(component_counts)),
        prefix_(std::move(ordered_prefix)) {}

  Kind kind() const { return kind_; }
  /// Class count per center, aligned with the packing centers (-1 if unknown).
  const std::vector<Index>& component_counts() const { return counts_; }
  /// Centers already ordered when the failure happened.
  const std::vector<Index>& ordered_prefix() const { return prefix_; }

 private:
  Kind kind_;
  std::vector<Index> counts_;
  std::vector<Index> prefix_;
};

std::string to_string(PinesFailure::Kind k);

/// Orders the packing centers. Throws PinesFailure on any violation.
std::vector<Index> order_packing(const DistanceTable& d, const PackingResult& pk, double rho2,
                                 double rho3);

struct SeriationOutput {
  /// Object k is placed at slot pi_hat(k).
  Permutation pi_hat;
  std::vector<Index> packing_order;
  /// Classes per packing center, aligned with packing_order.
  std::vector<Index> component_counts;
  PinesParams params;
  /// Radius escalations performed by `seriate` before PINES succeeded.
  Index escalations = 0;
  std::vector<std::string> flags;
};

SeriationOutput pines(const DistanceTable& d, const PinesParams& params);

enum class Model { toeplitz, latent, missing, supnorm };
std::string to_string(Model m);
Model model_from_string(const std::string& s);

/// (alpha, delta, epsilon) for a model at size n and bound A. `lambda` is
/// the observed fraction for the missing-data model.
PinesParams model_params(Model model, Index n, double A, const EstimatorConfig& cfg,
                         double lambda = 1.0);

struct SeriateOptions {
  EstimatorConfig estimator;
  /// Overrides the radii derived from the model.
  std::optional<PinesParams> radii;
  /// Mask for the missing-data model.
  std::optional<SymMatrix> mask;
  /// On PinesFailure, scale all radii by `escalation_factor` and retry; past
  /// the limit everything falls into one cell. Zero disables retries.
  Index max_escalations = 60;
  double escalation_factor = 1.25;
};

/// Estimator for the model, radii derived from (n, A) for the model
/// (or the override), then PINES.
SeriationOutput seriate(const SymMatrix& y, Model model, const SeriateOptions& opts = {});

/// Same pipeline on a precomputed distance table.
SeriationOutput seriate_distances(const DistanceTable& d, const PinesParams& base,
                                  const SeriateOptions& opts);

}  // namespace seriation
