#include "dqs/measure.hpp"

#include "dqs/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dqs {

namespace {

std::vector<int> all_leaves(const Process& p) { return p.leaves_below(p.root); }

/// a ->* b in the tree.
bool ancestor_or_self(const Process& p, int a, int b) {
  for (int cur = b; cur != -1; cur = p.parent[cur])
    if (cur == a) return true;
  return false;
}

bool comparable(const Process& p, int a, int b) {
  return ancestor_or_self(p, a, b) || ancestor_or_self(p, b, a);
}

/// Nonempty path-set intersection: anchors comparable in every process.
bool events_intersect(const PartialSystem& c, const PartialSystem& d) {
  for (std::size_t i = 0; i < c.anchors.size(); ++i)
    if (!comparable(c.system->processes[i], c.anchors[i], d.anchors[i]))
      return false;
  return true;
}

void product_over(const std::vector<std::vector<int>>& choices,
                  std::vector<MaximalPath>& out, std::size_t limit) {
  std::size_t total = 1;
  for (const auto& c : choices) {
    total *= c.size();
    if (total > limit)
      throw std::length_error("maximal path enumeration exceeds limit");
  }
  std::vector<std::size_t> pick(choices.size(), 0);
  while (true) {
    MaximalPath mp;
    for (std::size_t i = 0; i < choices.size(); ++i)
      mp.leaf.push_back(choices[i][pick[i]]);
    out.push_back(std::move(mp));
    std::size_t i = 0;
    for (; i < choices.size(); ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == choices.size()) break;
  }
}

}  // namespace

std::vector<MaximalPath> maximal_paths(const System& s, std::size_t limit) {
  std::vector<std::vector<int>> choices;
  for (const auto& p : s.processes) choices.push_back(all_leaves(p));
  std::vector<MaximalPath> out;
  product_over(choices, out, limit);
  return out;
}

std::set<MaximalPath> path_set(const PartialSystem& ps, std::size_t limit) {
  std::vector<std::vector<int>> choices;
  for (std::size_t i = 0; i < ps.anchors.size(); ++i)
    choices.push_back(ps.system->processes[i].leaves_below(ps.anchors[i]));
  std::vector<MaximalPath> out;
  product_over(choices, out, limit);
  return std::set<MaximalPath>(out.begin(), out.end());
}

double path_distance(const Process& p, const std::vector<int>& path_a,
                     const std::vector<int>& path_b) {
  auto check = [&](const std::vector<int>& path) {
    if (path.empty() || path.front() != p.root)
      throw std::invalid_argument("path does not start at the root");
    for (std::size_t i = 1; i < path.size(); ++i)
      if (p.parent[path[i]] != path[i - 1])
        throw std::invalid_argument("path edges must follow the tree");
    if (!p.is_leaf(path.back()))
      throw std::invalid_argument("path is not maximal");
  };
  check(path_a);
  check(path_b);
  if (path_a == path_b) return 0.0;
  std::size_t shared = 0;
  while (shared < path_a.size() && shared < path_b.size() &&
         path_a[shared] == path_b[shared])
    ++shared;
  return std::ldexp(1.0, -static_cast<int>(shared));
}

double path_distance_by_leaf(const Process& p, int leaf_a, int leaf_b) {
  return path_distance(p, p.path_from_root(leaf_a), p.path_from_root(leaf_b));
}

EventSet event_of(const PartialSystem& ps) {
  return EventSet{ps.system, {ps}};
}

EventSet empty_event(const System& s) { return EventSet{&s, {}}; }

IntersectResult intersect(const PartialSystem& c, const PartialSystem& d) {
  if (c.system != d.system)
    throw std::invalid_argument("intersect: partials of different systems");
  IntersectResult res;
  res.refinement_x = {c};
  res.refinement_y = {d};
  if (!events_intersect(c, d)) return res;  // disjoint; common stays empty

  PartialSystem e = c, f = d;
  while (e != f) {
    // Find a process where the anchors differ; the deeper anchor side stays,
    // the shallower one is expanded one branching step toward it.
    int proc = -1;
    bool expand_e = false;
    for (std::size_t i = 0; i < e.anchors.size(); ++i) {
      if (e.anchors[i] == f.anchors[i]) continue;
      const Process& p = c.system->processes[i];
      proc = static_cast<int>(i);
      expand_e = ancestor_or_self(p, e.anchors[i], f.anchors[i]);
      break;
    }
    if (proc < 0) break;  // unreachable: e != f implies some anchor differs

    auto& refinement = expand_e ? res.refinement_x : res.refinement_y;
    PartialSystem& cur = expand_e ? e : f;
    const PartialSystem& other = expand_e ? f : e;
    const auto kids = children_expansion(cur, proc);
    refinement.erase(std::find(refinement.begin(), refinement.end(), cur));
    PartialSystem next;
    bool found = false;
    for (const auto& k : kids) {
      refinement.push_back(k);
      if (events_intersect(k, other)) {
        next = k;
        found = true;
      }
    }
    if (!found)
      throw std::logic_error("intersect: no child meets the other partial");
    cur = next;
  }
  res.common = e;
  return res;
}

EventSet difference(const EventSet& x, const EventSet& y) {
  if (x.system != y.system)
    throw std::invalid_argument("difference: events of different systems");
  std::vector<PartialSystem> pieces = x.parts;
  for (const auto& d : y.parts) {
    std::vector<PartialSystem> next;
    for (const auto& c : pieces) {
      auto r = intersect(c, d);
      if (!r.common.has_value()) {
        next.push_back(c);
        continue;
      }
      for (const auto& g : r.refinement_x)
        if (!(g == *r.common)) next.push_back(g);
    }
    pieces = std::move(next);
  }
  return EventSet{x.system, std::move(pieces)};
}

std::vector<PartialSystem> common_refinement(std::vector<PartialSystem> x,
                                             std::vector<PartialSystem> y,
                                             bool debug_verify) {
  if (debug_verify) {
    auto disjoint_union = [](const std::vector<PartialSystem>& fam) {
      std::set<MaximalPath> u;
      std::size_t count = 0;
      for (const auto& ps : fam) {
        const auto paths = path_set(ps);
        count += paths.size();
        u.insert(paths.begin(), paths.end());
      }
      if (count != u.size())
        throw std::invalid_argument("common_refinement: family not disjoint");
      return u;
    };
    if (disjoint_union(x) != disjoint_union(y))
      throw std::invalid_argument(
          "common_refinement: path-set unions differ");
  }
  while (true) {
    bool changed = false;
    for (std::size_t i = 0; i < x.size() && !changed; ++i) {
      for (std::size_t j = 0; j < y.size() && !changed; ++j) {
        if (x[i] == y[j] || !events_intersect(x[i], y[j])) continue;
        auto r = intersect(x[i], y[j]);
        x.erase(x.begin() + static_cast<long>(i));
        x.insert(x.end(), r.refinement_x.begin(), r.refinement_x.end());
        y.erase(y.begin() + static_cast<long>(j));
        y.insert(y.end(), r.refinement_y.begin(), r.refinement_y.end());
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  if (x != y)
    throw std::logic_error("common_refinement: families failed to meet");
  return x;
}

double mu_unchecked(const DensityOperator& rho, const PartialSystem& c,
                    const Schedule& sched) {
  const Rational horizon = commit_horizon(c);
  const double raw = trace(evolve(c, sched, horizon, rho).state);
  if (raw < -1e-9 || raw > 1.0 + 1e-9)
    throw std::logic_error("mu: probability outside [0,1] tolerance band");
  return std::clamp(raw, 0.0, 1.0);
}

double mu(const DensityOperator& rho, const PartialSystem& c,
          const Schedule& sched) {
  const auto rep = validate_system(*c.system);
  if (!rep.ok() || !rep.trace_preserving())
    throw std::invalid_argument("mu needs a valid trace-preserving system");
  if (std::abs(trace(rho) - 1.0) > 1e-9)
    throw std::invalid_argument("mu needs a unit-trace state");
  return mu_unchecked(rho, c, sched);
}

MuReport mu_additivity_check(const System& s, const DensityOperator& rho,
                             const Schedule& sched, int samples,
                             std::uint64_t seed, double tol) {
  const auto srep = validate_system(s);
  if (!srep.ok() || !srep.trace_preserving())
    throw std::invalid_argument("additivity check needs a TP system");
  MuReport rep;
  rep.additivity_ok = true;
  rep.expansion_sum_ok = true;
  Rng rng(seed);

  std::vector<std::pair<int, int>> internal;  // (process, node)
  for (std::size_t i = 0; i < s.processes.size(); ++i)
    for (std::size_t n = 0; n < s.processes[i].actions.size(); ++n)
      if (s.processes[i].children[n].size() >= 1)
        internal.emplace_back(static_cast<int>(i), static_cast<int>(n));

  for (int k = 0; k < samples && !internal.empty(); ++k) {
    const auto [pi, node] =
        internal[rng.uniform_int(0, static_cast<int>(internal.size()) - 1)];
    const Process& p = s.processes[pi];
    std::vector<AnchorSpec> anchors(s.processes.size(), std::nullopt);
    anchors[pi] = p.actions[node].id;
    const auto parent = partial(s, anchors);
    double child_sum = 0.0;
    for (int ch : p.children[node]) {
      anchors[pi] = p.actions[ch].id;
      child_sum += mu_unchecked(rho, partial(s, anchors), sched);
    }
    const double parent_mu = mu_unchecked(rho, parent, sched);
    const double dev = std::abs(parent_mu - child_sum);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.families_checked;
    if (dev > tol) {
      rep.additivity_ok = false;
      rep.failures.push_back("branch additivity off by " +
                             std::to_string(dev) + " below " +
                             p.actions[node].id);
    }
  }

  // Random expansion chains: mu is preserved across any {C} ~>* P.
  for (int k = 0; k < samples; ++k) {
    std::vector<AnchorSpec> anchors;
    for (const auto& p : s.processes) {
      const int idx =
          rng.uniform_int(0, static_cast<int>(p.actions.size()) - 1);
      anchors.emplace_back(p.actions[idx].id);
    }
    const auto start = partial(s, anchors);
    std::vector<PartialSystem> family{start};
    const int steps = rng.uniform_int(0, 4);
    for (int step = 0; step < steps; ++step) {
      std::vector<std::pair<std::size_t, int>> expandable;
      for (std::size_t m = 0; m < family.size(); ++m)
        for (std::size_t pi2 = 0; pi2 < s.processes.size(); ++pi2)
          if (first_branching(family[m], static_cast<int>(pi2)) >= 0)
            expandable.emplace_back(m, static_cast<int>(pi2));
      if (expandable.empty()) break;
      const auto [m, pi2] = expandable[rng.uniform_int(
          0, static_cast<int>(expandable.size()) - 1)];
      auto kids = children_expansion(family[m], pi2);
      family.erase(family.begin() + static_cast<long>(m));
      family.insert(family.end(), kids.begin(), kids.end());
    }
    double sum = 0.0;
    for (const auto& d : family) sum += mu_unchecked(rho, d, sched);
    const double dev = std::abs(mu_unchecked(rho, start, sched) - sum);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.families_checked;
    if (dev > tol) {
      rep.expansion_sum_ok = false;
      rep.failures.push_back("expansion sum off by " + std::to_string(dev));
    }
  }
  return rep;
}

}  // namespace dqs
