#pragma once

#include "dqs/interval.hpp"
#include "dqs/operation.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dqs {

using ActionId = std::string;
using EnvLabel = std::string;

/// A timed event performing one quantum operation on a register, possibly
/// introducing environment degrees of freedom (tracked as opaque labels).
/// Unitary actions carry an empty environment.
struct Action {
  ActionId id;
  TimeInterval interval;
  QuantumOperation operation;
  std::set<EnvLabel> environment;

  /// Register as a set (sorted copy of the operation's register).
  Register sorted_register() const;
};

/// Rooted branching tree of actions. Edges mean strict sequential
/// succession; a node's children are the outcome branches of one
/// measurement.
struct Process {
  std::string name;
  std::vector<Action> actions;             // arena
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;  // insertion order kept
  int root = -1;

  const Action& action(int idx) const { return actions[idx]; }
  int index_of(const ActionId& id) const;  // -1 when absent
  bool is_leaf(int idx) const { return children[idx].empty(); }
  int depth_of(int idx) const;
  std::vector<int> path_from_root(int idx) const;
  std::vector<int> leaves_below(int idx) const;  // includes idx if leaf
};

/// Incremental tree builder; throws on duplicate or unknown ids.
class ProcessBuilder {
 public:
  explicit ProcessBuilder(std::string name);
  ProcessBuilder& root(Action a);
  ProcessBuilder& child(const ActionId& parent, Action a);
  Process build();

 private:
  Process p_;
};

/// Parallel composition of processes with disjoint environments.
struct System {
  std::vector<Process> processes;

  std::pair<int, int> find_action(const ActionId& id) const;  // (-1,-1) absent
  Register qubits() const;  // sorted union over all actions
};

struct ProcessReport {
  bool rooted_tree = false;
  bool sequentiality = false;
  bool branching = false;
  bool trace_preserving = false;
  bool aligned = false;

  bool ok() const { return rooted_tree && sequentiality && branching; }
};

struct SystemReport {
  std::vector<ProcessReport> processes;
  bool environment_disjoint = false;
  bool ids_unique = false;

  bool ok() const;
  bool trace_preserving() const;
  bool aligned() const;
};

/// Per-flag validation. Structural defects (dangling parent references,
/// duplicate arena ids) throw std::invalid_argument; semantic conditions are
/// report-only.
ProcessReport validate_process(const Process& p, double tol = 1e-9);
SystemReport validate_system(const System& s, double tol = 1e-9);

/// Actions whose interval meets the region.
std::vector<ActionId> restrict_actions(const System& s,
                                       const std::vector<ActionId>& ids,
                                       const Region& region);

/// True iff `a` is register- or time-disjoint from every action of every
/// other process.
bool is_local(const ActionId& a, const System& s);

/// True iff every cross-process pair in `d` has strictly ordered intervals.
bool is_atomic(const std::set<ActionId>& d, const System& s);

/// Partial system: per process, the rooted path to an anchor plus the
/// subtree below it. Anchors are stored canonically (the highest node
/// realizing the same action set), so equality of partials is structural;
/// the whole process is the root anchor.
struct PartialSystem {
  const System* system = nullptr;
  std::vector<int> anchors;  // arena index per process

  friend bool operator==(const PartialSystem&, const PartialSystem&) = default;
  bool operator<(const PartialSystem& o) const { return anchors < o.anchors; }
};

/// WHOLE is spelled std::nullopt.
using AnchorSpec = std::optional<ActionId>;

PartialSystem whole_partial(const System& s);
PartialSystem partial(const System& s, const std::vector<AnchorSpec>& anchors);

/// Highest node h with the same induced set as anchor idx.
int canonical_anchor(const Process& p, int idx);

/// Induced action set of one process of the partial (path + subtree).
std::vector<int> induced_actions(const PartialSystem& ps, int proc);

/// Path to the anchor extended below it while the branch is forced
/// (single children). These are the actions a run committed to.
std::vector<int> committed_chain(const PartialSystem& ps, int proc);

/// First node with >= 2 children at or below the anchor of `proc`, or -1.
int first_branching(const PartialSystem& ps, int proc);

/// Elementary refinement step: one partial per child of the branching node
/// `at` (which must realize this process's anchor). Throws when `at` does
/// not match or is a leaf.
std::vector<PartialSystem> children_expansion(const PartialSystem& ps,
                                              int proc, const ActionId& at);
std::vector<PartialSystem> children_expansion(const PartialSystem& ps,
                                              int proc);

/// Whether the evolved trace is constant after time t: per process, either
/// t >= max T[anchor] or every induced action meeting [t, max T[anchor]]
/// is trace-preserving; conjoined over processes.
bool is_trace_preserving_after(const PartialSystem& ps, const Rational& t,
                               double tol = 1e-9);

/// Max over processes of the canonical anchor depth.
int ell(const PartialSystem& ps);

/// Earliest instant with is_trace_preserving_after true for finite trees:
/// the latest anchor completion.
Rational commit_horizon(const PartialSystem& ps);

/// Finite description of a repeating measure-and-recurse process.
struct ProcessTemplate {
  std::string id_prefix;
  QuantumOperation root_op;
  TimeInterval root_interval;
  std::vector<QuantumOperation> branch_ops;  // one sibling family
  int recurse_on = 0;                        // which branch continues
  Rational period;                           // level-k start offset
  Rational width;                            // action duration, < period
  std::set<EnvLabel> environment;            // family labels (measurements)
};

/// Finite truncation: `depth` branching levels below the root; the
/// recursive arm ends in a leaf at the last level.
Process unfold(const ProcessTemplate& tmpl, int depth);

}  // namespace dqs
