#include "dqs/dynamics.hpp"

#include "dqs/sampling.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dqs {

namespace {

struct Event {
  Rational tau;
  int proc;
  const Action* act;
};

Rational family_commit_instant(const Process& p, int node,
                               const Schedule& sched) {
  Rational commit = 0;
  for (int c : p.children[node])
    commit = std::max(commit, sched.at(p.actions[c].id));
  return commit;
}

/// Whether this branch still has an unresolved branching in the window.
/// Under a schedule, the branching nearest the anchor gates everything
/// deeper: a deeper family can only commit after every path to it has, so
/// checking the first branching suffices. Without a schedule the whole
/// induced subtree is scanned (siblings entering the window at different
/// times can hide a deeper in-window branching behind a not-yet-entered
/// one).
bool needs_expansion(const PartialSystem& ps, int proc, const Rational& t,
                     const Schedule* sched, bool inclusive) {
  const Process& p = ps.system->processes[proc];
  const int f = first_branching(ps, proc);
  if (f < 0) return false;
  if (sched) {
    const Rational commit = family_commit_instant(p, f, *sched);
    return inclusive ? commit <= t : commit < t;
  }
  std::vector<int> stack{f};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    int entering = 0;
    for (int c : p.children[cur]) {
      if (p.actions[c].interval.lo <= t) ++entering;
      stack.push_back(c);
    }
    if (p.children[cur].size() >= 2 && entering >= 2) return true;
  }
  return false;
}

std::vector<PartialSystem> decompose(const PartialSystem& c, const Rational& t,
                                     const Schedule* sched, bool inclusive) {
  std::vector<PartialSystem> done;
  std::deque<PartialSystem> work{c};
  while (!work.empty()) {
    PartialSystem cur = std::move(work.front());
    work.pop_front();
    bool expanded = false;
    for (std::size_t i = 0; i < cur.anchors.size() && !expanded; ++i) {
      if (needs_expansion(cur, static_cast<int>(i), t, sched, inclusive)) {
        for (auto& child : children_expansion(cur, static_cast<int>(i)))
          work.push_back(std::move(child));
        expanded = true;
      }
    }
    if (!expanded) done.push_back(std::move(cur));
  }
  return done;
}

std::vector<Event> committed_events(const PartialSystem& d,
                                    const Schedule& sched, const Rational& t,
                                    const std::map<ActionId, int>* rank,
                                    bool inclusive) {
  std::vector<Event> events;
  for (std::size_t i = 0; i < d.anchors.size(); ++i) {
    const Process& p = d.system->processes[i];
    for (int idx : committed_chain(d, static_cast<int>(i))) {
      const Action& a = p.actions[idx];
      const Rational& tau = sched.at(a.id);
      if (inclusive ? tau <= t : tau < t)
        events.push_back({tau, static_cast<int>(i), &a});
    }
  }
  auto key_less = [&](const Event& x, const Event& y) {
    if (x.tau != y.tau) return x.tau < y.tau;
    if (rank) {
      const auto rx = rank->find(x.act->id);
      const auto ry = rank->find(y.act->id);
      if (rx != rank->end() && ry != rank->end() && rx->second != ry->second)
        return rx->second < ry->second;
    }
    if (x.proc != y.proc) return x.proc < y.proc;
    return x.act->id < y.act->id;
  };
  std::sort(events.begin(), events.end(), key_less);
  return events;
}

EvolutionResult run_branch(const PartialSystem& d, const Schedule& sched,
                           const Rational& t, const DensityOperator& rho,
                           const std::map<ActionId, int>* rank,
                           bool inclusive) {
  for (std::size_t i = 0; i < d.anchors.size(); ++i)
    if (needs_expansion(d, static_cast<int>(i), t, &sched, inclusive))
      throw std::invalid_argument(
          "evolve_branch_free: partial has a committed branching before t");

  const auto events = committed_events(d, sched, t, rank, inclusive);
  EvolutionResult res{rho, {}, {}};
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1;
         j < events.size() && events[j].tau == events[i].tau; ++j) {
      if (events[i].proc != events[j].proc &&
          !registers_disjoint(events[i].act->operation.qubits,
                              events[j].act->operation.qubits))
        res.warnings.push_back(
            "simultaneous overlapping actions '" + events[i].act->id +
            "' and '" + events[j].act->id + "' at t=" +
            to_string(events[i].tau) + "; applied in fixed order");
    }
  }
  for (const auto& e : events) {
    res.state = apply(e.act->operation, res.state);
    res.applied.emplace_back(e.act->id, e.tau);
  }
  return res;
}

EvolutionResult evolve_impl(const PartialSystem& c, const Schedule& sched,
                            const Rational& t, const DensityOperator& rho,
                            const std::map<ActionId, int>* rank,
                            bool inclusive) {
  const auto parts = decompose(c, t, &sched, inclusive);
  if (parts.size() == 1)
    return run_branch(parts.front(), sched, t, rho, rank, inclusive);

  const long dim = rho.mat.rows();
  EvolutionResult res{DensityOperator{rho.qubits, CMat::Zero(dim, dim)},
                      {},
                      {}};
  std::set<std::pair<Rational, ActionId>> log;
  std::set<std::string> warnings;
  for (const auto& d : parts) {
    auto r = run_branch(d, sched, t, rho, rank, inclusive);
    res.state.mat += r.state.mat;
    for (auto& [id, tau] : r.applied) log.insert({tau, id});
    warnings.insert(r.warnings.begin(), r.warnings.end());
  }
  for (const auto& [tau, id] : log) res.applied.emplace_back(id, tau);
  res.warnings.assign(warnings.begin(), warnings.end());
  return res;
}

}  // namespace

std::vector<PartialSystem> branch_free_prefix_decomposition(
    const PartialSystem& c, const Rational& t) {
  return decompose(c, t, nullptr, true);
}

std::vector<PartialSystem> branch_free_prefix_decomposition(
    const PartialSystem& c, const Rational& t, const Schedule& sched) {
  return decompose(c, t, &sched, true);
}

EvolutionResult evolve_branch_free(const PartialSystem& d,
                                   const Schedule& sched, const Rational& t,
                                   const DensityOperator& rho) {
  return run_branch(d, sched, t, rho, nullptr, true);
}

EvolutionResult evolve(const PartialSystem& c, const Schedule& sched,
                       const Rational& t, const DensityOperator& rho) {
  return evolve_impl(c, sched, t, rho, nullptr, true);
}

EvolutionResult evolve_before(const PartialSystem& c, const Schedule& sched,
                              const Rational& t, const DensityOperator& rho) {
  return evolve_impl(c, sched, t, rho, nullptr, false);
}

OrderScan evolve_all_orders(const PartialSystem& c, const Schedule& sched,
                            const Rational& t, const DensityOperator& rho,
                            int max_orders) {
  // Tie groups: same instant, more than one process, overlapping registers.
  std::map<Rational, std::vector<std::pair<int, const Action*>>> by_tau;
  const System& s = *c.system;
  for (std::size_t i = 0; i < s.processes.size(); ++i)
    for (const auto& a : s.processes[i].actions) {
      const Rational& tau = sched.at(a.id);
      if (tau <= t) by_tau[tau].emplace_back(static_cast<int>(i), &a);
    }
  std::vector<std::vector<const Action*>> groups;
  for (auto& [tau, members] : by_tau) {
    if (members.size() < 2) continue;
    bool overlap = false;
    for (std::size_t i = 0; i < members.size() && !overlap; ++i)
      for (std::size_t j = i + 1; j < members.size() && !overlap; ++j)
        if (members[i].first != members[j].first &&
            !registers_disjoint(members[i].second->operation.qubits,
                                members[j].second->operation.qubits))
          overlap = true;
    if (!overlap) continue;
    std::vector<const Action*> g;
    for (auto& [proc, act] : members) g.push_back(act);
    groups.push_back(std::move(g));
  }

  OrderScan scan;
  if (groups.empty()) {
    scan.results.push_back(evolve(c, sched, t, rho));
    return scan;
  }

  long total = 1;
  for (const auto& g : groups) {
    long f = 1;
    for (std::size_t k = 2; k <= g.size(); ++k) f *= static_cast<long>(k);
    total *= f;
    if (total > max_orders)
      throw std::invalid_argument("too many tie-break orders to enumerate");
  }
  scan.orders = static_cast<int>(total);

  std::vector<std::vector<int>> perm(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    perm[g].resize(groups[g].size());
    std::iota(perm[g].begin(), perm[g].end(), 0);
  }
  while (true) {
    std::map<ActionId, int> rank;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::size_t k = 0; k < perm[g].size(); ++k)
        rank[groups[g][perm[g][k]]->id] = static_cast<int>(k);
    scan.results.push_back(evolve_impl(c, sched, t, rho, &rank, true));

    // Odometer over the per-group permutations.
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      if (std::next_permutation(perm[g].begin(), perm[g].end())) break;
      // wrapped to the identity; carry on to the next group
    }
    if (g == groups.size()) break;
  }

  for (std::size_t i = 0; i < scan.results.size(); ++i)
    for (std::size_t j = i + 1; j < scan.results.size(); ++j)
      scan.max_divergence =
          std::max(scan.max_divergence,
                   max_abs(scan.results[i].state.mat - scan.results[j].state.mat));
  return scan;
}

namespace {

Rational grid_epsilon(const std::vector<Rational>& instants) {
  std::vector<Rational> sorted = instants;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Rational gap = 1;
  bool found = false;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const Rational d = sorted[i] - sorted[i - 1];
    if (d > 0 && (!found || d < gap)) {
      gap = d;
      found = true;
    }
  }
  return gap / 1000;
}

std::vector<DensityOperator> sample_states(const System& s, int extra,
                                           Rng& rng) {
  const Register q = s.qubits();
  std::vector<DensityOperator> states;
  states.push_back(basis_state(q, std::string(q.size(), '0')));
  states.push_back(basis_state(q, std::string(q.size(), '1')));
  for (int i = 0; i < extra; ++i) states.push_back(random_pure_state(rng, q));
  return states;
}

PartialSystem sample_partial(const System& s, Rng& rng) {
  std::vector<AnchorSpec> anchors;
  for (const auto& p : s.processes) {
    const int idx = rng.uniform_int(0, static_cast<int>(p.actions.size()) - 1);
    anchors.emplace_back(p.actions[idx].id);
  }
  return partial(s, anchors);
}

}  // namespace

AxiomReport check_dynamics_axioms(const System& s, const Schedule& sched,
                                  const AxiomCheckConfig& cfg,
                                  const Evolver& evolver_in) {
  const Evolver evolver =
      evolver_in ? evolver_in
                 : Evolver([](const PartialSystem& c, const Schedule& sc,
                              const Rational& t, const DensityOperator& rho) {
                     return evolve(c, sc, t, rho);
                   });
  AxiomReport rep;
  rep.initial_ok = rep.branching_ok = rep.factorization_ok = true;
  rep.dijkstra_lamport_ok = true;
  rep.trace_monotone_ok = rep.trace_constant_after_ok = true;
  Rng rng(cfg.seed);
  const auto states = sample_states(s, cfg.state_samples, rng);
  const PartialSystem whole = whole_partial(s);

  std::vector<PartialSystem> partials{whole};
  for (int i = 0; i < cfg.partial_samples; ++i)
    partials.push_back(sample_partial(s, rng));

  std::vector<Rational> instants;
  for (const auto& [id, tau] : sched.tau) instants.push_back(tau);
  const Rational eps = grid_epsilon(instants);

  // Initial condition: identity at time zero.
  for (const auto& c : partials)
    for (const auto& rho : states) {
      const auto r = evolver(c, sched, Rational(0), rho);
      if (max_abs(r.state.mat - rho.mat) > cfg.tol) {
        rep.initial_ok = false;
        rep.failures.push_back("initial: state changed at t=0");
      }
    }

  // Branching sums once a sibling family has completed.
  for (std::size_t pi = 0; pi < s.processes.size(); ++pi) {
    const Process& p = s.processes[pi];
    for (std::size_t ni = 0; ni < p.actions.size(); ++ni) {
      if (p.children[ni].size() < 2) continue;
      Rational done = 0;
      for (int ch : p.children[ni])
        done = std::max(done, p.actions[ch].interval.hi);
      std::vector<AnchorSpec> anchors;
      for (const auto& q : s.processes) anchors.emplace_back(q.actions[q.root].id);
      anchors[pi] = p.actions[ni].id;
      const PartialSystem parent = partial(s, anchors);
      std::vector<PartialSystem> kids;
      for (int ch : p.children[ni]) {
        auto a2 = anchors;
        a2[pi] = p.actions[ch].id;
        kids.push_back(partial(s, a2));
      }
      for (const Rational& t : {done, done + 1}) {
        for (const auto& rho : states) {
          CMat sum = CMat::Zero(rho.mat.rows(), rho.mat.cols());
          for (const auto& k : kids) sum += evolver(k, sched, t, rho).state.mat;
          const auto r = evolver(parent, sched, t, rho);
          if (max_abs(r.state.mat - sum) > cfg.tol) {
            rep.branching_ok = false;
            rep.failures.push_back("branching: sum mismatch below " +
                                   p.actions[ni].id);
          }
        }
      }
    }
  }

  // Evolution: factorization over a register-disjoint interval, with the
  // local-action instance F_A = E[a].
  int instances = 0;
  for (std::size_t pi = 0;
       pi < s.processes.size() && instances < 4 * cfg.partial_samples; ++pi) {
    const Process& p = s.processes[pi];
    for (const auto& a : p.actions) {
      if (instances >= 4 * cfg.partial_samples) break;
      if (!is_local(a.id, s)) continue;
      bool clean = true;  // sole action of its process meeting its interval
      for (const auto& b : p.actions)
        if (b.id != a.id && b.interval.intersects(a.interval)) clean = false;
      if (!clean) continue;
      const Rational x = a.interval.lo;
      const Rational y = a.interval.hi;
      if (x == 0) continue;
      const Rational t_left = x - eps;

      for (const auto& d : branch_free_prefix_decomposition(whole, y, sched)) {
        const auto chain = committed_chain(d, static_cast<int>(pi));
        const int ai = p.index_of(a.id);
        if (std::find(chain.begin(), chain.end(), ai) == chain.end()) continue;
        // Other-process factor: committed events inside [x, y], applied in
        // the evolver's own tie-break order.
        std::vector<std::tuple<Rational, int, const Action*>> other;
        for (std::size_t qi = 0; qi < s.processes.size(); ++qi) {
          if (qi == pi) continue;
          for (int idx : committed_chain(d, static_cast<int>(qi))) {
            const Action& b = s.processes[qi].actions[idx];
            const Rational& tau = sched.at(b.id);
            if (x <= tau && tau <= y)
              other.emplace_back(tau, static_cast<int>(qi), &b);
          }
        }
        std::sort(other.begin(), other.end(),
                  [](const auto& l, const auto& r) {
                    if (std::get<0>(l) != std::get<0>(r))
                      return std::get<0>(l) < std::get<0>(r);
                    if (std::get<1>(l) != std::get<1>(r))
                      return std::get<1>(l) < std::get<1>(r);
                    return std::get<2>(l)->id < std::get<2>(r)->id;
                  });
        ++instances;
        for (const auto& rho : states) {
          const auto lhs = evolver(d, sched, y, rho);
          auto mid = evolver(d, sched, t_left, rho);
          for (const auto& [tau, qi, b] : other)
            mid.state = apply(b->operation, mid.state);
          mid.state = apply(a.operation, mid.state);
          if (max_abs(lhs.state.mat - mid.state.mat) > cfg.tol) {
            rep.factorization_ok = false;
            rep.dijkstra_lamport_ok = false;
            rep.failures.push_back("evolution: local action '" + a.id +
                                   "' does not act as its operation");
          }
        }
        break;  // one committed branch exercises the instance
      }
    }
  }
  rep.dijkstra_lamport_instances = instances;

  // Trace: non-increasing over the instant grid, constant past the point
  // where the partial is trace-preserving-after.
  std::vector<Rational> grid{Rational(0)};
  for (const auto& tau : instants) {
    if (tau > eps) grid.push_back(tau - eps);
    grid.push_back(tau);
    grid.push_back(tau + eps);
  }
  Rational last = 0;
  for (const auto& t : grid) last = std::max(last, t);
  grid.push_back(last + 1);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  for (const auto& c : partials) {
    for (const auto& rho : states) {
      double prev = trace(rho);
      bool constant_from_here = false;
      double settled = 0.0;
      for (const auto& t : grid) {
        const double tr = trace(evolver(c, sched, t, rho).state);
        if (tr > prev + cfg.tol) {
          rep.trace_monotone_ok = false;
          rep.failures.push_back("trace: increased at t=" + to_string(t));
        }
        if (constant_from_here && std::abs(tr - settled) > cfg.tol) {
          rep.trace_constant_after_ok = false;
          rep.failures.push_back("trace: changed after commit horizon at t=" +
                                 to_string(t));
        }
        if (!constant_from_here && is_trace_preserving_after(c, t)) {
          constant_from_here = true;
          settled = tr;
        }
        prev = tr;
      }
    }
  }
  return rep;
}

}  // namespace dqs
