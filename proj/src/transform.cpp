#include "dqs/transform.hpp"

#include "dqs/sampling.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dqs {

Isomorphism identity_isomorphism(const System& s) {
  Isomorphism m;
  for (std::size_t i = 0; i < s.processes.size(); ++i) {
    m.process_map.push_back(static_cast<int>(i));
    for (const auto& a : s.processes[i].actions) m.action_map[a.id] = a.id;
  }
  return m;
}

IsoReport check_isomorphism(const System& s1, const System& s2,
                            const Isomorphism& m) {
  IsoReport rep;
  auto fail = [&](const std::string& why) {
    if (rep.first_violation.empty()) rep.first_violation = why;
  };

  // Bijectivity of both the process and the action correspondence.
  rep.bijective = true;
  if (m.process_map.size() != s1.processes.size() ||
      s1.processes.size() != s2.processes.size()) {
    rep.bijective = false;
    fail("process correspondence is not a bijection");
  } else {
    std::set<int> seen(m.process_map.begin(), m.process_map.end());
    if (seen.size() != m.process_map.size() ||
        *seen.begin() < 0 ||
        *seen.rbegin() >= static_cast<int>(s2.processes.size())) {
      rep.bijective = false;
      fail("process correspondence is not a bijection");
    }
  }
  std::size_t n1 = 0, n2 = 0;
  for (const auto& p : s1.processes) n1 += p.actions.size();
  for (const auto& p : s2.processes) n2 += p.actions.size();
  std::set<ActionId> images;
  for (const auto& [a, b] : m.action_map) images.insert(b);
  if (m.action_map.size() != n1 || images.size() != n2 || n1 != n2) {
    rep.bijective = false;
    fail("action mapping is not a bijection");
  }
  if (!rep.bijective) return rep;

  rep.preserves_edges = true;
  rep.preserves_register = true;
  rep.preserves_operation = true;
  for (std::size_t i = 0; i < s1.processes.size(); ++i) {
    const Process& p1 = s1.processes[i];
    const Process& p2 = s2.processes[m.process_map[i]];
    for (std::size_t a = 0; a < p1.actions.size(); ++a) {
      const auto it = m.action_map.find(p1.actions[a].id);
      if (it == m.action_map.end()) {
        rep.bijective = false;
        fail("unmapped action " + p1.actions[a].id);
        return rep;
      }
      const int b = p2.index_of(it->second);
      if (b < 0) {
        rep.preserves_edges = false;
        fail("image not in the corresponding process: " + it->second);
        continue;
      }
      // Edge preservation through the parent pointer.
      const int pa = p1.parent[a];
      if (pa >= 0) {
        const auto pit = m.action_map.find(p1.actions[pa].id);
        const int pb = pit == m.action_map.end() ? -1 : p2.index_of(pit->second);
        if (pb < 0 || p2.parent[b] != pb) {
          rep.preserves_edges = false;
          fail("edge not preserved at " + p1.actions[a].id);
        }
      } else if (p2.parent[b] != -1) {
        rep.preserves_edges = false;
        fail("root not mapped to a root: " + p1.actions[a].id);
      }

      const auto& op1 = p1.actions[a].operation;
      const auto& op2 = p2.actions[b].operation;
      if (op1.qubits != op2.qubits) {
        rep.preserves_register = false;
        fail("register differs at " + p1.actions[a].id);
      }
      bool same = op1.kraus.size() == op2.kraus.size();
      for (std::size_t k = 0; same && k < op1.kraus.size(); ++k) {
        if (op1.kraus[k].rows() != op2.kraus[k].rows() ||
            op1.kraus[k].cols() != op2.kraus[k].cols() ||
            max_abs(op1.kraus[k] - op2.kraus[k]) > 1e-12)
          same = false;
      }
      if (!same) {
        rep.preserves_operation = false;
        fail("operation differs at " + p1.actions[a].id);
      }
    }
  }
  return rep;
}

namespace {

/// Sibling family of an action: its parent's children, or just itself for a
/// root.
std::vector<int> family_of(const Process& p, int idx) {
  if (p.parent[idx] == -1) return {idx};
  return p.children[p.parent[idx]];
}

System shrink_actions(const System& s,
                      const std::map<ActionId, Rational>& chosen) {
  System out = s;
  for (auto& p : out.processes)
    for (auto& a : p.actions) {
      const auto it = chosen.find(a.id);
      if (it == chosen.end()) continue;
      a.interval = TimeInterval(it->second, it->second);
      a.environment.clear();
    }
  return out;
}

}  // namespace

TransformResult make_instantaneous(
    const System& s, const std::vector<ActionId>& targets,
    const std::map<ActionId, Rational>& instants) {
  std::map<ActionId, Rational> chosen;
  std::vector<std::string> warnings;
  std::set<ActionId> target_set(targets.begin(), targets.end());

  for (const auto& id : targets) {
    const auto [pi, ai] = s.find_action(id);
    if (pi < 0) throw std::invalid_argument("unknown target action: " + id);
    if (!is_local(id, s))
      throw std::invalid_argument("target action is not local: " + id);
  }
  for (const auto& [id, t] : instants) {
    const auto [pi, ai] = s.find_action(id);
    if (pi < 0) throw std::invalid_argument("instant for unknown action: " + id);
    if (!s.processes[pi].actions[ai].interval.contains(t))
      throw std::invalid_argument("instant outside interval for " + id);
  }

  std::set<ActionId> done;
  for (const auto& id : targets) {
    if (done.count(id)) continue;
    const auto [pi, ai] = s.find_action(id);
    const Process& p = s.processes[pi];
    std::vector<int> targeted;
    for (int c : family_of(p, ai))
      if (target_set.count(p.actions[c].id)) targeted.push_back(c);

    bool have_explicit = false;
    for (int c : targeted)
      if (instants.count(p.actions[c].id)) have_explicit = true;
    if (have_explicit) {
      for (int c : targeted) {
        const auto& cid = p.actions[c].id;
        const auto it = instants.find(cid);
        if (it == instants.end())
          throw std::invalid_argument(
              "explicit instants must cover the whole targeted family of " +
              cid);
        chosen[cid] = it->second;
        done.insert(cid);
      }
      if (targeted.size() >= 2) {
        const Rational& t0 = chosen[p.actions[targeted.front()].id];
        for (int c : targeted)
          if (chosen[p.actions[c].id] != t0)
            warnings.push_back("sibling instants differ within family of " +
                               p.actions[targeted.front()].id);
      }
      continue;
    }

    // Common default instant for the targeted siblings.
    Rational lo = p.actions[targeted.front()].interval.lo;
    Rational hi = p.actions[targeted.front()].interval.hi;
    for (int c : targeted) {
      lo = std::max(lo, p.actions[c].interval.lo);
      hi = std::min(hi, p.actions[c].interval.hi);
    }
    Rational t;
    if (targeted.size() < family_of(p, ai).size() && targeted.size() >= 1 &&
        family_of(p, ai).size() >= 2) {
      // Part of the family stays interval-valued; pin to the family start so
      // sibling alignment survives.
      t = lo;
      if (lo > hi)
        throw std::invalid_argument("no common instant for the family of " +
                                    id);
    } else {
      if (lo > hi)
        throw std::invalid_argument("no common instant for the family of " +
                                    id);
      t = (lo + hi) / 2;
    }
    for (int c : targeted) {
      chosen[p.actions[c].id] = t;
      done.insert(p.actions[c].id);
    }
  }

  TransformResult res{shrink_actions(s, chosen), identity_isomorphism(s),
                      std::move(warnings)};
  return res;
}

TransformResult atomize(const System& s) {
  const auto rep = validate_system(s);
  std::vector<std::string> violations;
  if (!rep.ok()) violations.push_back("system fails structural validation");
  if (!rep.trace_preserving())
    violations.push_back("system is not trace-preserving");
  if (!rep.aligned()) violations.push_back("system is not aligned");
  for (const auto& p : s.processes)
    for (const auto& a : p.actions)
      if (a.interval.is_instant())
        violations.push_back("zero-length interval at " + a.id);
  if (!violations.empty()) {
    std::string msg = "atomize preconditions violated:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }

  std::vector<std::string> warnings;
  std::map<ActionId, Rational> chosen;
  // Instants already taken, per process that owns them.
  std::vector<std::pair<int, Rational>> taken;

  for (std::size_t pi = 0; pi < s.processes.size(); ++pi) {
    const Process& p = s.processes[pi];
    // Breadth-first over the tree, families handled as one unit.
    std::vector<int> order{p.root};
    for (std::size_t h = 0; h < order.size(); ++h)
      for (int c : p.children[order[h]]) order.push_back(c);

    std::set<int> placed;
    for (int idx : order) {
      if (placed.count(idx)) continue;
      std::vector<int> family = family_of(p, idx);
      std::vector<int> local_members;
      for (int c : family) {
        placed.insert(c);
        if (is_local(p.actions[c].id, s)) local_members.push_back(c);
      }
      if (local_members.empty()) continue;

      Rational lo = p.actions[local_members.front()].interval.lo;
      Rational hi = p.actions[local_members.front()].interval.hi;
      for (int c : local_members) {
        lo = std::max(lo, p.actions[c].interval.lo);
        hi = std::min(hi, p.actions[c].interval.hi);
      }

      auto excluded = [&](const Rational& t) {
        for (const auto& [owner, inst] : taken)
          if (owner != static_cast<int>(pi) && inst == t) return true;
        return false;
      };

      Rational t;
      bool found = false;
      if (local_members.size() < family.size()) {
        // Mixed family: only the shared start preserves alignment with the
        // untouched siblings.
        if (!excluded(lo)) {
          t = lo;
          found = true;
        } else {
          warnings.push_back(
              "family of " + p.actions[idx].id +
              " left interval-valued: shared start instant already taken");
          continue;
        }
      } else {
        int exclusions = 0;
        for (const auto& [owner, inst] : taken)
          if (owner != static_cast<int>(pi) && lo <= inst && inst <= hi)
            ++exclusions;
        const int k_max = 1 + exclusions;
        for (int k = 1; k <= k_max && !found; ++k) {
          const Rational cand = lo + k * (hi - lo) / (k_max + 1);
          if (!excluded(cand)) {
            t = cand;
            found = true;
          }
        }
        if (!found)
          throw std::logic_error("atomize: no free instant found");
      }
      for (int c : local_members) chosen[p.actions[c].id] = t;
      taken.emplace_back(static_cast<int>(pi), t);
    }
  }

  TransformResult res{shrink_actions(s, chosen), identity_isomorphism(s),
                      std::move(warnings)};
  return res;
}

PartialSystem map_partial(const PartialSystem& ps, const System& s2,
                          const Isomorphism& m) {
  std::vector<AnchorSpec> anchors(s2.processes.size(), std::nullopt);
  for (std::size_t i = 0; i < ps.anchors.size(); ++i) {
    const auto& id = ps.system->processes[i].actions[ps.anchors[i]].id;
    anchors[m.process_map[i]] = m.action_map.at(id);
  }
  return partial(s2, anchors);
}

EquivReport equivalence_check(const System& s1, const System& s2,
                              const Isomorphism& m,
                              const EquivalenceConfig& cfg) {
  EquivReport rep;
  const auto iso = check_isomorphism(s1, s2, m);
  rep.isomorphism_ok = iso.ok();
  if (!rep.isomorphism_ok) {
    rep.failures.push_back("isomorphism: " + iso.first_violation);
    return rep;
  }
  for (const System* s : {&s1, &s2}) {
    const auto v = validate_system(*s);
    if (!v.ok() || !v.trace_preserving())
      throw std::invalid_argument(
          "equivalence check needs valid trace-preserving systems");
  }

  // Generator events: per process, canonical anchors within the depth bound.
  std::vector<std::vector<AnchorSpec>> per_proc;
  for (const auto& p : s1.processes) {
    std::vector<AnchorSpec> anchors;
    for (std::size_t n = 0; n < p.actions.size(); ++n) {
      const bool canonical =
          p.parent[n] == -1 || p.children[p.parent[n]].size() >= 2;
      if (canonical && p.depth_of(static_cast<int>(n)) <= cfg.depth)
        anchors.emplace_back(p.actions[n].id);
    }
    per_proc.push_back(std::move(anchors));
  }
  std::vector<PartialSystem> events;
  std::vector<std::size_t> pick(per_proc.size(), 0);
  while (true) {
    std::vector<AnchorSpec> anchors;
    for (std::size_t i = 0; i < per_proc.size(); ++i)
      anchors.push_back(per_proc[i][pick[i]]);
    events.push_back(partial(s1, anchors));
    std::size_t i = 0;
    for (; i < per_proc.size(); ++i) {
      if (++pick[i] < per_proc[i].size()) break;
      pick[i] = 0;
    }
    if (i == per_proc.size()) break;
  }

  // Test states: all computational basis states plus seeded random ones.
  const Register q = s1.qubits();
  std::vector<DensityOperator> states;
  const long dim = 1L << q.size();
  for (long b = 0; b < dim; ++b) {
    std::string bits;
    for (long k = static_cast<long>(q.size()) - 1; k >= 0; --k)
      bits += ((b >> k) & 1) ? '1' : '0';
    states.push_back(basis_state(q, bits));
  }
  Rng rng(cfg.seed);
  for (int i = 0; i < cfg.states; ++i)
    states.push_back(random_pure_state(rng, q));

  for (const auto policy : cfg.policies) {
    const Schedule sched1 = make_schedule(s1, policy);
    const Schedule sched2 = make_schedule(s2, policy);
    for (const auto& event : events) {
      const PartialSystem image = map_partial(event, s2, m);
      for (const auto& rho : states) {
        const double p1 = mu_unchecked(rho, event, sched1);
        const double p2 = mu_unchecked(rho, image, sched2);
        const double dev = std::abs(p1 - p2);
        rep.max_deviation = std::max(rep.max_deviation, dev);
        ++rep.comparisons;
        if (dev > cfg.tol && rep.failures.size() < 16) {
          rep.failures.push_back(
              "mu differs by " + std::to_string(dev) + " on event anchored (" +
              s1.processes[0].actions[event.anchors[0]].id + ", ...) under " +
              to_string(policy));
        }
      }
    }
  }
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace dqs
