#pragma once

#include "dqs/scenario.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace dqs {

/// Builds the bundled example scenarios (s1..s4 in synchronous and
/// asynchronous variants, plus the overlapping non-local clash) with gates
/// drawn deterministically from the seed. Returns name -> scenario.
std::map<std::string, Scenario> bundled_scenarios(std::uint64_t seed);

/// Writes every bundled scenario as <dir>/<name>.json.
void write_bundled_scenarios(const std::string& dir, std::uint64_t seed);

}  // namespace dqs
