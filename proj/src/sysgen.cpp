#include "dqs/sysgen.hpp"

#include <algorithm>
#include <stdexcept>

namespace dqs {

namespace {

struct Frontier {
  ActionId id;  // current leaf to grow from
};

}  // namespace

System random_local_system(const RandomSystemConfig& cfg) {
  if (cfg.qubits < cfg.max_processes)
    throw std::invalid_argument("need at least one qubit per process");
  Rng rng(cfg.seed);
  const int nproc = rng.uniform_int(cfg.min_processes, cfg.max_processes);

  Register qubits;
  for (int q = 0; q < cfg.qubits; ++q) qubits.push_back("q" + std::to_string(q));

  std::vector<ProcessBuilder> builders;
  std::vector<std::vector<Frontier>> frontiers(nproc);
  std::vector<bool> started(nproc, false);
  std::vector<int> action_count(nproc, 0);
  std::vector<int> dev_count(nproc, 0);
  for (int i = 0; i < nproc; ++i) builders.emplace_back("P" + std::to_string(i));

  for (int slot = 1; slot <= cfg.slots; ++slot) {
    // Disjoint register allocation for this slot.
    Register pool = qubits;
    for (std::size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[rng.uniform_int(0, static_cast<int>(i) - 1)]);
    std::vector<Register> alloc(nproc);
    std::size_t next = 0;
    for (int i = 0; i < nproc; ++i) {
      const bool active = started[i] ? rng.uniform() < 0.85 : true;
      if (!active) continue;
      const int want = 1 + (rng.uniform() < 0.3 ? 1 : 0);
      for (int w = 0; w < want && next < pool.size(); ++w)
        alloc[i].push_back(pool[next++]);
    }

    for (int i = 0; i < nproc; ++i) {
      if (alloc[i].empty()) continue;
      // One family per slot; all frontier leaves of the process grow the
      // same way so sibling intervals can share a start.
      Rational lo(slot);
      Rational hi = Rational(slot) + Rational(1, 2);
      if (cfg.jitter) {
        lo += Rational(rng.uniform_int(0, 9), 60);
        hi -= Rational(rng.uniform_int(0, 9), 60);
      }
      const TimeInterval iv(lo, hi);

      const bool measure =
          started[i] && rng.uniform() < cfg.measure_prob &&
          static_cast<int>(frontiers[i].size()) * 2 <= cfg.max_paths_per_process;
      auto next_id = [&]() {
        return "P" + std::to_string(i) + "." + std::to_string(action_count[i]++);
      };

      if (!started[i]) {
        const CMat u = haar_unitary(rng, 1L << alloc[i].size());
        const ActionId id = next_id();
        builders[i].root(Action{
            id, iv, QuantumOperation{alloc[i], {u}, OpKind::Unitary}, {}});
        frontiers[i] = {Frontier{id}};
        started[i] = true;
        continue;
      }

      std::vector<Frontier> grown;
      if (measure) {
        const QubitId mq = alloc[i][rng.uniform_int(
            0, static_cast<int>(alloc[i].size()) - 1)];
        const std::set<EnvLabel> env{"P" + std::to_string(i) + ".dev" +
                                     std::to_string(dev_count[i]++)};
        for (const auto& leaf : frontiers[i]) {
          for (int outcome : {0, 1}) {
            const ActionId id = next_id();
            builders[i].child(leaf.id,
                              Action{id, iv, measure_z(mq, {outcome}), env});
            grown.push_back(Frontier{id});
          }
        }
      } else {
        for (const auto& leaf : frontiers[i]) {
          const CMat u = haar_unitary(rng, 1L << alloc[i].size());
          const ActionId id = next_id();
          builders[i].child(
              leaf.id, Action{id, iv,
                              QuantumOperation{alloc[i], {u}, OpKind::Unitary},
                              {}});
          grown.push_back(Frontier{id});
        }
      }
      frontiers[i] = std::move(grown);
    }
  }

  System s;
  for (int i = 0; i < nproc; ++i) {
    if (!started[i]) {
      // A process that never got a register still needs a root.
      const QubitId q = qubits[static_cast<std::size_t>(i) % qubits.size()];
      builders[i].root(Action{"P" + std::to_string(i) + ".0",
                              TimeInterval(Rational(cfg.slots + 2 + i),
                                           Rational(cfg.slots + 2 + i) +
                                               Rational(1, 4)),
                              identity_op({q}),
                              {}});
    }
    s.processes.push_back(builders[i].build());
  }
  return s;
}

}  // namespace dqs
