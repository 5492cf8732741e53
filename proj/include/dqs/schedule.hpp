#pragma once

#include "dqs/model.hpp"

#include <map>
#include <string>

namespace dqs {

/// When within its interval an action takes effect. Policies resolve the
/// instant from the interval; measurement sibling families get a common
/// instant whenever one exists.
enum class SchedulePolicy { Completion, Start, Midpoint, Explicit };

std::string to_string(SchedulePolicy p);
SchedulePolicy parse_policy(const std::string& name);

struct Schedule {
  SchedulePolicy policy = SchedulePolicy::Completion;
  std::map<ActionId, Rational> tau;

  const Rational& at(const ActionId& id) const;
};

/// Builds the instant map for a whole system. Completion: max T[a];
/// start: min T[a]; midpoint: (lo+hi)/2. Sibling families of size >= 2 are
/// forced to a common instant: the latest family start under start/midpoint,
/// and the earliest family completion under completion (falling back to the
/// latest start when that misses some sibling interval). Families with no
/// common instant keep the per-action values.
Schedule make_schedule(const System& s, SchedulePolicy policy);

/// Explicit instants; validates tau(a) in T[a] for every action and, for
/// aligned systems, rejects sibling-inconsistent maps.
Schedule make_explicit_schedule(const System& s,
                                const std::map<ActionId, Rational>& tau);

}  // namespace dqs
