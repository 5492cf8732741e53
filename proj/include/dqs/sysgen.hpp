#pragma once

#include "dqs/model.hpp"
#include "dqs/sampling.hpp"

#include <cstdint>

namespace dqs {

/// Knobs for seeded random systems. The construction is slot-based: within
/// a slot, active processes get disjoint registers, so concurrent actions
/// are always register-disjoint and every action is local; across slots the
/// processes revisit shared qubits. The result is trace-preserving, aligned,
/// with positive-length intervals starting after 0.
struct RandomSystemConfig {
  int min_processes = 2;
  int max_processes = 3;
  int qubits = 3;
  int slots = 4;
  double measure_prob = 0.35;
  int max_paths_per_process = 8;
  bool jitter = true;  // de-synchronise interval endpoints within slots
  std::uint64_t seed = 1;
};

System random_local_system(const RandomSystemConfig& cfg);

}  // namespace dqs
