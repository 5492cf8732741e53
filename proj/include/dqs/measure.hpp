#pragma once

#include "dqs/dynamics.hpp"
#include "dqs/model.hpp"

#include <optional>
#include <set>
#include <vector>

namespace dqs {

/// Complete outcome history: one root-to-leaf path per process. A path is
/// identified by its leaf, so a history is the per-process leaf tuple.
struct MaximalPath {
  std::vector<int> leaf;  // arena index per process

  friend bool operator==(const MaximalPath&, const MaximalPath&) = default;
  bool operator<(const MaximalPath& o) const { return leaf < o.leaf; }
};

/// Full enumeration (product over processes of root-to-leaf paths). Throws
/// when the product exceeds `limit`.
std::vector<MaximalPath> maximal_paths(const System& s,
                                       std::size_t limit = 1u << 20);

/// Histories consistent with a partial system: per process, leaves below
/// (or at) the anchor.
std::set<MaximalPath> path_set(const PartialSystem& ps,
                               std::size_t limit = 1u << 20);

/// Tree metric on maximal paths of one process: 0 when equal, else
/// 2^-(shared prefix length).
double path_distance(const Process& p, const std::vector<int>& path_a,
                     const std::vector<int>& path_b);
/// Convenience overload taking the leaf indices.
double path_distance_by_leaf(const Process& p, int leaf_a, int leaf_b);

/// Event in the generator class: empty, or a finite disjoint union of
/// partial-system path sets. Members are kept pairwise disjoint
/// (per-process anchor incomparability in some coordinate).
struct EventSet {
  const System* system = nullptr;
  std::vector<PartialSystem> parts;

  bool empty() const { return parts.empty(); }
};

EventSet event_of(const PartialSystem& ps);
EventSet empty_event(const System& s);

struct IntersectResult {
  std::vector<PartialSystem> refinement_x;  // refines the first argument
  std::vector<PartialSystem> refinement_y;  // refines the second
  std::optional<PartialSystem> common;      // paths = intersection, or empty
};

/// Refines both partials until their path sets' intersection is realized by
/// a single common partial (or found empty when anchors are incomparable in
/// some process).
IntersectResult intersect(const PartialSystem& c, const PartialSystem& d);

/// Set difference as a disjoint union of partial-system events.
EventSet difference(const EventSet& x, const EventSet& y);

/// Given two disjoint families with equal path-set unions, refines both to
/// one common family. With `debug_verify`, the precondition is checked by
/// enumeration.
std::vector<PartialSystem> common_refinement(std::vector<PartialSystem> x,
                                             std::vector<PartialSystem> y,
                                             bool debug_verify = false);

/// Probability of the event of a partial system: the evolved trace at the
/// commit horizon (where it has become constant), clamped to [0, 1].
/// Requires a trace-preserving system and a unit-trace state.
double mu(const DensityOperator& rho, const PartialSystem& c,
          const Schedule& sched);

/// Like mu but skips the system validation (for callers that validated).
double mu_unchecked(const DensityOperator& rho, const PartialSystem& c,
                    const Schedule& sched);

/// Measure of a finite disjoint-union event; the empty event has measure 0.
double mu_event(const DensityOperator& rho, const EventSet& ev,
                const Schedule& sched);

struct MuReport {
  bool additivity_ok = false;
  bool expansion_sum_ok = false;
  double max_deviation = 0.0;
  int families_checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return additivity_ok && expansion_sum_ok; }
};

/// Samples branch families and random expansion chains and checks the
/// measure adds up across them, within `tol`.
MuReport mu_additivity_check(const System& s, const DensityOperator& rho,
                             const Schedule& sched, int samples,
                             std::uint64_t seed = 1, double tol = 1e-9);

}  // namespace dqs
