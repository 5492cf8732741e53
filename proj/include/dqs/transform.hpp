#pragma once

#include "dqs/measure.hpp"
#include "dqs/model.hpp"
#include "dqs/schedule.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dqs {

/// Bijection between the actions of two systems, with an explicit process
/// correspondence. Preserves the tree relation and the logical content
/// (register and Kraus list); the physical properties (interval,
/// environment) are free.
struct Isomorphism {
  std::vector<int> process_map;             // s1 process -> s2 process
  std::map<ActionId, ActionId> action_map;  // s1 action -> s2 action
};

Isomorphism identity_isomorphism(const System& s);

struct IsoReport {
  bool bijective = false;
  bool preserves_edges = false;
  bool preserves_register = false;
  bool preserves_operation = false;
  std::string first_violation;

  bool ok() const {
    return bijective && preserves_edges && preserves_register &&
           preserves_operation;
  }
};

/// Kraus lists must match entrywise (same order) within 1e-12.
IsoReport check_isomorphism(const System& s1, const System& s2,
                            const Isomorphism& m);

struct TransformResult {
  System system;
  Isomorphism gamma;
  std::vector<std::string> warnings;
};

/// Shrinks the targeted local actions to instants inside their intervals and
/// clears their environments; non-targets are unchanged. Targets that are
/// measurement siblings receive a common instant. Explicit instants may be
/// supplied per action.
TransformResult make_instantaneous(
    const System& s, const std::vector<ActionId>& targets,
    const std::map<ActionId, Rational>& instants = {});

/// Makes every local action instantaneous at a deterministic instant chosen
/// inside its interval, avoiding the instants of all previously placed
/// local actions from other processes, so the local actions of the result
/// are atomic. Requires a trace-preserving, aligned system whose intervals
/// all have positive length.
TransformResult atomize(const System& s);

struct EquivalenceConfig {
  int depth = 8;        // enumerate partials with ell <= depth
  int states = 4;       // random pure states besides the basis states
  double tol = 1e-9;
  std::vector<SchedulePolicy> policies = {SchedulePolicy::Completion,
                                          SchedulePolicy::Start,
                                          SchedulePolicy::Midpoint};
  std::uint64_t seed = 12345;
};

struct EquivReport {
  bool isomorphism_ok = false;
  bool pass = false;
  double max_deviation = 0.0;
  long comparisons = 0;
  std::vector<std::string> failures;
};

/// Compares the observable measures of the two systems over every generator
/// event with ell within the configured depth, on all computational basis
/// states plus seeded random pure states, under each schedule policy.
EquivReport equivalence_check(const System& s1, const System& s2,
                              const Isomorphism& m,
                              const EquivalenceConfig& cfg);

/// Image of a partial system under the isomorphism.
PartialSystem map_partial(const PartialSystem& ps, const System& s2,
                          const Isomorphism& m);

}  // namespace dqs
