#include "dqs/schedule.hpp"

#include <stdexcept>

namespace dqs {

std::string to_string(SchedulePolicy p) {
  switch (p) {
    case SchedulePolicy::Completion: return "completion";
    case SchedulePolicy::Start: return "start";
    case SchedulePolicy::Midpoint: return "midpoint";
    case SchedulePolicy::Explicit: return "explicit";
  }
  return "?";
}

SchedulePolicy parse_policy(const std::string& name) {
  if (name == "completion") return SchedulePolicy::Completion;
  if (name == "start") return SchedulePolicy::Start;
  if (name == "midpoint") return SchedulePolicy::Midpoint;
  if (name == "explicit") return SchedulePolicy::Explicit;
  throw std::invalid_argument("unknown schedule policy: " + name);
}

const Rational& Schedule::at(const ActionId& id) const {
  const auto it = tau.find(id);
  if (it == tau.end())
    throw std::out_of_range("schedule missing action: " + id);
  return it->second;
}

Schedule make_schedule(const System& s, SchedulePolicy policy) {
  if (policy == SchedulePolicy::Explicit)
    throw std::invalid_argument("explicit policy needs a full instant map");
  Schedule sched;
  sched.policy = policy;
  auto instant_for = [&](const TimeInterval& iv) -> Rational {
    switch (policy) {
      case SchedulePolicy::Completion: return iv.hi;
      case SchedulePolicy::Start: return iv.lo;
      default: return iv.midpoint();
    }
  };
  for (const auto& p : s.processes)
    for (const auto& a : p.actions) sched.tau[a.id] = instant_for(a.interval);

  // Force sibling families onto a common instant where one exists.
  for (const auto& p : s.processes) {
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      const auto& kids = p.children[i];
      if (kids.size() < 2) continue;
      Rational latest_start = p.actions[kids.front()].interval.lo;
      Rational earliest_end = p.actions[kids.front()].interval.hi;
      for (int c : kids) {
        latest_start = std::max(latest_start, p.actions[c].interval.lo);
        earliest_end = std::min(earliest_end, p.actions[c].interval.hi);
      }
      auto fits_all = [&](const Rational& t) {
        for (int c : kids)
          if (!p.actions[c].interval.contains(t)) return false;
        return true;
      };
      Rational common;
      bool have = false;
      if (policy == SchedulePolicy::Completion) {
        if (fits_all(earliest_end)) {
          common = earliest_end;
          have = true;
        } else if (fits_all(latest_start)) {
          common = latest_start;
          have = true;
        }
      } else {
        if (fits_all(latest_start)) {
          common = latest_start;
          have = true;
        }
      }
      if (have)
        for (int c : kids) sched.tau[p.actions[c].id] = common;
    }
  }
  return sched;
}

Schedule make_explicit_schedule(const System& s,
                                const std::map<ActionId, Rational>& tau) {
  Schedule sched;
  sched.policy = SchedulePolicy::Explicit;
  const bool aligned = validate_system(s).aligned();
  for (const auto& p : s.processes) {
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      const Action& a = p.actions[i];
      const auto it = tau.find(a.id);
      if (it == tau.end())
        throw std::invalid_argument("explicit schedule missing action: " +
                                    a.id);
      if (!a.interval.contains(it->second))
        throw std::invalid_argument("instant outside interval for " + a.id);
      sched.tau[a.id] = it->second;
    }
    if (!aligned) continue;
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      const auto& kids = p.children[i];
      if (kids.size() < 2) continue;
      const Rational& t0 = sched.tau[p.actions[kids.front()].id];
      for (int c : kids)
        if (sched.tau[p.actions[c].id] != t0)
          throw std::invalid_argument(
              "sibling instants differ in an aligned system at " +
              p.actions[i].id);
    }
  }
  return sched;
}

}  // namespace dqs
