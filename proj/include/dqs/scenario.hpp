#pragma once

#include "dqs/model.hpp"
#include "dqs/schedule.hpp"
#include "dqs/transform.hpp"

#include <map>
#include <optional>
#include <string>

namespace dqs {

/// On-disk description of a system: named qubits, one action tree per
/// process, an initial state, and optional per-action schedule overrides.
/// Rationals are exact strings; matrices are nested [re, im] arrays.
struct Scenario {
  std::string name;
  Register qubits;  // declaration order; also the state's register order
  System system;
  std::optional<DensityOperator> initial;  // default |0...0>
  std::map<ActionId, Rational> schedule_overrides;

  DensityOperator initial_state() const;
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& sc);
void save_scenario(const std::string& path, const Scenario& sc);

/// Mapping file for equivalence checks: a list of (left id, right id) pairs
/// plus an optional explicit process correspondence.
Isomorphism load_mapping(const std::string& path, const System& s1,
                         const System& s2);
void save_mapping(const std::string& path, const Isomorphism& m);

}  // namespace dqs
