#pragma once

#include "dqs/model.hpp"
#include "dqs/schedule.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dqs {

struct EvolutionResult {
  DensityOperator state;
  /// Distinct applied events, sorted by (instant, process, id).
  std::vector<std::pair<ActionId, Rational>> applied;
  std::vector<std::string> warnings;
};

/// Refines the partial with respect to its branchings until every member is
/// branch-free on [0, t]; with a schedule, a branching counts only once its
/// sibling family has committed (all sibling instants <= t). The returned
/// family's maximal-path sets partition the input's exactly.
std::vector<PartialSystem> branch_free_prefix_decomposition(
    const PartialSystem& c, const Rational& t);
std::vector<PartialSystem> branch_free_prefix_decomposition(
    const PartialSystem& c, const Rational& t, const Schedule& sched);

/// Applies every committed action with tau(a) <= t in ascending instant
/// order. Instant ties between register-disjoint actions commute; ties on
/// overlapping registers are applied in (process, id) order and recorded as
/// a warning. Requires the partial to be branch-free on [0, t] under the
/// schedule.
EvolutionResult evolve_branch_free(const PartialSystem& d,
                                   const Schedule& sched, const Rational& t,
                                   const DensityOperator& rho);

/// Full dynamics: decomposes into branch-free partials and sums the evolved
/// states over the committed branches.
EvolutionResult evolve(const PartialSystem& c, const Schedule& sched,
                       const Rational& t, const DensityOperator& rho);

/// Left limit: applies only instants strictly before t.
EvolutionResult evolve_before(const PartialSystem& c, const Schedule& sched,
                              const Rational& t, const DensityOperator& rho);

/// Enumeration mode for simultaneous overlapping actions: runs every
/// tie-break order and reports the largest pairwise state difference.
struct OrderScan {
  std::vector<EvolutionResult> results;
  double max_divergence = 0.0;
  int orders = 1;
};
OrderScan evolve_all_orders(const PartialSystem& c, const Schedule& sched,
                            const Rational& t, const DensityOperator& rho,
                            int max_orders = 720);

/// Pluggable backend for the axiom checker (used to re-certify alternative
/// dynamics and for negative-control mutants).
using Evolver = std::function<EvolutionResult(
    const PartialSystem&, const Schedule&, const Rational&,
    const DensityOperator&)>;

struct AxiomCheckConfig {
  int partial_samples = 6;
  int state_samples = 2;  // random pure states, in addition to basis corners
  std::uint64_t seed = 1;
  double tol = 1e-10;
};

struct AxiomReport {
  bool initial_ok = false;
  bool branching_ok = false;
  bool factorization_ok = false;
  bool dijkstra_lamport_ok = false;
  bool trace_monotone_ok = false;
  bool trace_constant_after_ok = false;
  int dijkstra_lamport_instances = 0;
  std::vector<std::string> failures;

  bool ok() const {
    return initial_ok && branching_ok && factorization_ok &&
           dijkstra_lamport_ok && trace_monotone_ok && trace_constant_after_ok;
  }
};

/// Property-checks the four defining conditions of the dynamics on sampled
/// partials, times and states: identity at time zero; branching sums after
/// sibling completion; factorization over register-disjoint restrictions
/// including the local-action (Dijkstra-Lamport) instance; trace
/// monotonicity and constancy past the commit horizon.
AxiomReport check_dynamics_axioms(const System& s, const Schedule& sched,
                                  const AxiomCheckConfig& cfg,
                                  const Evolver& evolver = {});

}  // namespace dqs
