#include "dqs/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace dqs {

Register Action::sorted_register() const {
  Register r = operation.qubits;
  std::sort(r.begin(), r.end());
  return r;
}

int Process::index_of(const ActionId& id) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i].id == id) return static_cast<int>(i);
  return -1;
}

int Process::depth_of(int idx) const {
  int d = 0;
  for (int cur = idx; parent[cur] != -1; cur = parent[cur]) ++d;
  return d;
}

std::vector<int> Process::path_from_root(int idx) const {
  std::vector<int> path;
  for (int cur = idx; cur != -1; cur = parent[cur]) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> Process::leaves_below(int idx) const {
  std::vector<int> out, stack{idx};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (children[cur].empty()) out.push_back(cur);
    for (auto it = children[cur].rbegin(); it != children[cur].rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

ProcessBuilder::ProcessBuilder(std::string name) { p_.name = std::move(name); }

ProcessBuilder& ProcessBuilder::root(Action a) {
  if (p_.root != -1) throw std::invalid_argument("process already has a root");
  p_.actions.push_back(std::move(a));
  p_.parent.push_back(-1);
  p_.children.emplace_back();
  p_.root = 0;
  return *this;
}

ProcessBuilder& ProcessBuilder::child(const ActionId& parent, Action a) {
  const int pi = p_.index_of(parent);
  if (pi < 0) throw std::invalid_argument("unknown parent action: " + parent);
  if (p_.index_of(a.id) >= 0)
    throw std::invalid_argument("duplicate action id: " + a.id);
  p_.actions.push_back(std::move(a));
  p_.parent.push_back(pi);
  p_.children.emplace_back();
  p_.children[pi].push_back(static_cast<int>(p_.actions.size()) - 1);
  return *this;
}

Process ProcessBuilder::build() {
  if (p_.root == -1) throw std::invalid_argument("process has no root");
  return std::move(p_);
}

std::pair<int, int> System::find_action(const ActionId& id) const {
  for (std::size_t i = 0; i < processes.size(); ++i) {
    const int a = processes[i].index_of(id);
    if (a >= 0) return {static_cast<int>(i), a};
  }
  return {-1, -1};
}

Register System::qubits() const {
  std::set<QubitId> u;
  for (const auto& p : processes)
    for (const auto& a : p.actions)
      u.insert(a.operation.qubits.begin(), a.operation.qubits.end());
  return Register(u.begin(), u.end());
}

bool SystemReport::ok() const {
  if (!environment_disjoint || !ids_unique) return false;
  for (const auto& p : processes)
    if (!p.ok()) return false;
  return true;
}

bool SystemReport::trace_preserving() const {
  for (const auto& p : processes)
    if (!p.trace_preserving) return false;
  return true;
}

bool SystemReport::aligned() const {
  for (const auto& p : processes)
    if (!p.aligned) return false;
  return true;
}

namespace {

void check_structure(const Process& p) {
  const int n = static_cast<int>(p.actions.size());
  if (n == 0 || p.root < 0 || p.root >= n)
    throw std::invalid_argument("process has no valid root");
  if (static_cast<int>(p.parent.size()) != n ||
      static_cast<int>(p.children.size()) != n)
    throw std::invalid_argument("process arena arrays out of sync");
  std::set<ActionId> ids;
  for (const auto& a : p.actions)
    if (!ids.insert(a.id).second)
      throw std::invalid_argument("duplicate action id: " + a.id);
  for (int i = 0; i < n; ++i) {
    if (p.parent[i] < -1 || p.parent[i] >= n)
      throw std::invalid_argument("dangling parent reference");
    for (int c : p.children[i])
      if (c < 0 || c >= n || p.parent[c] != i)
        throw std::invalid_argument("inconsistent child reference");
  }
}

bool family_sum_valid(const Process& p, const std::vector<int>& kids,
                      bool& tp, double tol) {
  // Concatenated Kraus lists of the siblings; they share one register.
  QuantumOperation sum;
  sum.qubits = p.actions[kids.front()].operation.qubits;
  for (int c : kids) {
    const auto& op = p.actions[c].operation;
    if (!register_equal(op.qubits, sum.qubits)) return false;
    for (const auto& e : op.kraus)
      sum.kraus.push_back(embed(e, op.qubits, sum.qubits));
  }
  const auto rep = check_validity(sum, tol);
  tp = rep.trace_preserving;
  return rep.ok();
}

}  // namespace

ProcessReport validate_process(const Process& p, double tol) {
  check_structure(p);
  ProcessReport rep;

  // Rooted tree: every non-root has one parent and is reachable from root.
  const int n = static_cast<int>(p.actions.size());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{p.root};
  int visited = 0;
  bool cycle = false;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    if (seen[cur]) {
      cycle = true;
      break;
    }
    seen[cur] = true;
    ++visited;
    for (int c : p.children[cur]) stack.push_back(c);
  }
  rep.rooted_tree = !cycle && visited == n && p.parent[p.root] == -1;

  rep.sequentiality = true;
  for (int i = 0; i < n; ++i)
    for (int c : p.children[i])
      if (!p.actions[i].interval.strictly_before(p.actions[c].interval))
        rep.sequentiality = false;

  rep.branching = true;
  rep.trace_preserving = true;
  rep.aligned = true;
  for (int i = 0; i < n; ++i) {
    const auto& kids = p.children[i];
    if (kids.empty()) continue;
    const Register r0 = p.actions[kids.front()].sorted_register();
    const Rational lo0 = p.actions[kids.front()].interval.lo;
    const auto& e0 = p.actions[kids.front()].environment;
    for (int c : kids) {
      if (p.actions[c].sorted_register() != r0) rep.branching = false;
      if (p.actions[c].interval.lo != lo0) rep.aligned = false;
      if (p.actions[c].environment != e0) rep.aligned = false;
    }
    bool tp = false;
    if (!family_sum_valid(p, kids, tp, tol)) rep.branching = false;
    if (!tp) rep.trace_preserving = false;
  }
  // The root is not covered by any sibling family; the whole-process event
  // has probability one only when its operation preserves trace.
  if (!check_validity(p.actions[p.root].operation, tol).trace_preserving)
    rep.trace_preserving = false;
  if (!rep.branching) rep.aligned = false;
  return rep;
}

SystemReport validate_system(const System& s, double tol) {
  if (s.processes.empty())
    throw std::invalid_argument("system needs at least one process");
  SystemReport rep;
  for (const auto& p : s.processes)
    rep.processes.push_back(validate_process(p, tol));

  rep.environment_disjoint = true;
  for (std::size_t i = 0; i < s.processes.size(); ++i) {
    std::set<EnvLabel> ei;
    for (const auto& a : s.processes[i].actions)
      ei.insert(a.environment.begin(), a.environment.end());
    for (std::size_t j = i + 1; j < s.processes.size(); ++j)
      for (const auto& a : s.processes[j].actions)
        for (const auto& lbl : a.environment)
          if (ei.count(lbl)) rep.environment_disjoint = false;
  }

  rep.ids_unique = true;
  std::set<ActionId> ids;
  for (const auto& p : s.processes)
    for (const auto& a : p.actions)
      if (!ids.insert(a.id).second) rep.ids_unique = false;
  return rep;
}

std::vector<ActionId> restrict_actions(const System& s,
                                       const std::vector<ActionId>& ids,
                                       const Region& region) {
  std::vector<ActionId> out;
  for (const auto& id : ids) {
    const auto [pi, ai] = s.find_action(id);
    if (pi < 0) throw std::out_of_range("unknown action id: " + id);
    if (region_intersects(region, s.processes[pi].actions[ai].interval))
      out.push_back(id);
  }
  return out;
}

bool is_local(const ActionId& id, const System& s) {
  const auto [pi, ai] = s.find_action(id);
  if (pi < 0) throw std::out_of_range("action not in system: " + id);
  const Action& a = s.processes[pi].actions[ai];
  const Register ra = a.operation.qubits;
  for (std::size_t j = 0; j < s.processes.size(); ++j) {
    if (static_cast<int>(j) == pi) continue;
    for (const auto& b : s.processes[j].actions) {
      if (!registers_disjoint(ra, b.operation.qubits) &&
          a.interval.intersects(b.interval))
        return false;
    }
  }
  return true;
}

bool is_atomic(const std::set<ActionId>& d, const System& s) {
  std::vector<std::pair<int, const Action*>> acts;
  for (const auto& id : d) {
    const auto [pi, ai] = s.find_action(id);
    if (pi < 0) throw std::out_of_range("action not in system: " + id);
    acts.emplace_back(pi, &s.processes[pi].actions[ai]);
  }
  for (std::size_t i = 0; i < acts.size(); ++i)
    for (std::size_t j = i + 1; j < acts.size(); ++j) {
      if (acts[i].first == acts[j].first) continue;
      const auto& ta = acts[i].second->interval;
      const auto& tb = acts[j].second->interval;
      if (!ta.strictly_before(tb) && !tb.strictly_before(ta)) return false;
    }
  return true;
}

int canonical_anchor(const Process& p, int idx) {
  int cur = idx;
  while (p.parent[cur] != -1 && p.children[p.parent[cur]].size() == 1)
    cur = p.parent[cur];
  return cur;
}

PartialSystem whole_partial(const System& s) {
  PartialSystem ps;
  ps.system = &s;
  for (const auto& p : s.processes)
    ps.anchors.push_back(canonical_anchor(p, p.root));
  return ps;
}

PartialSystem partial(const System& s, const std::vector<AnchorSpec>& anchors) {
  if (anchors.size() != s.processes.size())
    throw std::invalid_argument("one anchor per process required");
  PartialSystem ps;
  ps.system = &s;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Process& p = s.processes[i];
    int idx = p.root;
    if (anchors[i].has_value()) {
      idx = p.index_of(*anchors[i]);
      if (idx < 0)
        throw std::invalid_argument("anchor not an action of process " +
                                    p.name + ": " + *anchors[i]);
    }
    ps.anchors.push_back(canonical_anchor(p, idx));
  }
  return ps;
}

std::vector<int> induced_actions(const PartialSystem& ps, int proc) {
  const Process& p = ps.system->processes[proc];
  std::vector<int> out = p.path_from_root(ps.anchors[proc]);
  std::vector<int> stack = p.children[ps.anchors[proc]];
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (int c : p.children[cur]) stack.push_back(c);
  }
  return out;
}

std::vector<int> committed_chain(const PartialSystem& ps, int proc) {
  const Process& p = ps.system->processes[proc];
  std::vector<int> chain = p.path_from_root(ps.anchors[proc]);
  int cur = ps.anchors[proc];
  while (p.children[cur].size() == 1) {
    cur = p.children[cur].front();
    chain.push_back(cur);
  }
  return chain;
}

int first_branching(const PartialSystem& ps, int proc) {
  const Process& p = ps.system->processes[proc];
  int cur = ps.anchors[proc];
  while (true) {
    if (p.children[cur].size() >= 2) return cur;
    if (p.children[cur].empty()) return -1;
    cur = p.children[cur].front();
  }
}

std::vector<PartialSystem> children_expansion(const PartialSystem& ps,
                                              int proc) {
  const int at = first_branching(ps, proc);
  if (at < 0)
    throw std::invalid_argument("children_expansion at a leaf branch");
  const Process& p = ps.system->processes[proc];
  std::vector<PartialSystem> out;
  for (int c : p.children[at]) {
    PartialSystem next = ps;
    next.anchors[proc] = c;  // already canonical: parent has >= 2 children
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<PartialSystem> children_expansion(const PartialSystem& ps,
                                              int proc, const ActionId& at) {
  const Process& p = ps.system->processes[proc];
  const int idx = p.index_of(at);
  if (idx < 0) throw std::invalid_argument("unknown action: " + at);
  if (p.is_leaf(idx))
    throw std::invalid_argument("children_expansion at a leaf: " + at);
  if (canonical_anchor(p, idx) != ps.anchors[proc])
    throw std::invalid_argument("action does not realize this partial: " + at);
  if (p.children[idx].size() == 1)
    // Expanding through a single child realizes the same partial; the
    // elementary step happens at the branching node.
    return children_expansion(ps, proc);
  std::vector<PartialSystem> out;
  for (int c : p.children[idx]) {
    PartialSystem next = ps;
    next.anchors[proc] = canonical_anchor(p, c);
    out.push_back(std::move(next));
  }
  return out;
}

bool is_trace_preserving_after(const PartialSystem& ps, const Rational& t,
                               double tol) {
  for (std::size_t i = 0; i < ps.anchors.size(); ++i) {
    const Process& p = ps.system->processes[i];
    const Rational horizon = p.actions[ps.anchors[i]].interval.hi;
    if (t >= horizon) continue;
    bool ok = true;
    const Region window{{t, horizon, false}};
    for (int idx : induced_actions(ps, static_cast<int>(i))) {
      const Action& a = p.actions[idx];
      if (!region_intersects(window, a.interval)) continue;
      if (!check_validity(a.operation, tol).trace_preserving) ok = false;
    }
    if (!ok) return false;
  }
  return true;
}

int ell(const PartialSystem& ps) {
  int m = 0;
  for (std::size_t i = 0; i < ps.anchors.size(); ++i)
    m = std::max(m, ps.system->processes[i].depth_of(ps.anchors[i]));
  return m;
}

Rational commit_horizon(const PartialSystem& ps) {
  Rational t = 0;
  for (std::size_t i = 0; i < ps.anchors.size(); ++i) {
    const auto& hi = ps.system->processes[i].actions[ps.anchors[i]].interval.hi;
    if (hi > t) t = hi;
  }
  return t;
}

Process unfold(const ProcessTemplate& tmpl, int depth) {
  if (tmpl.period <= 0)
    throw std::invalid_argument("unfold: period must be positive");
  if (tmpl.width < 0 || tmpl.width >= tmpl.period)
    throw std::invalid_argument("unfold: width must lie in [0, period)");
  if (depth < 0 || depth > 24)
    throw std::invalid_argument("unfold: depth out of range");
  if (tmpl.branch_ops.empty())
    throw std::invalid_argument("unfold: no branch operations");
  if (tmpl.recurse_on < 0 ||
      tmpl.recurse_on >= static_cast<int>(tmpl.branch_ops.size()))
    throw std::invalid_argument("unfold: recurse_on out of range");
  if (depth > 0 && tmpl.root_interval.hi >= tmpl.root_interval.lo + tmpl.period)
    throw std::invalid_argument("unfold: root interval reaches into level 1");

  auto env_for = [&](const QuantumOperation& op) {
    return op.kind == OpKind::Unitary ? std::set<EnvLabel>{} : tmpl.environment;
  };

  ProcessBuilder b(tmpl.id_prefix);
  const ActionId root_id = tmpl.id_prefix + ".0";
  b.root(Action{root_id, tmpl.root_interval, tmpl.root_op,
                env_for(tmpl.root_op)});
  ActionId frontier = root_id;
  const Rational base = tmpl.root_interval.lo;
  for (int level = 1; level <= depth; ++level) {
    const Rational lo = base + level * tmpl.period;
    const TimeInterval iv(lo, lo + tmpl.width);
    ActionId next_frontier;
    for (std::size_t k = 0; k < tmpl.branch_ops.size(); ++k) {
      const ActionId id =
          tmpl.id_prefix + "." + std::to_string(level) + "." + std::to_string(k);
      b.child(frontier, Action{id, iv, tmpl.branch_ops[k],
                               env_for(tmpl.branch_ops[k])});
      if (static_cast<int>(k) == tmpl.recurse_on) next_frontier = id;
    }
    frontier = next_frontier;
  }
  return b.build();
}

}  // namespace dqs
