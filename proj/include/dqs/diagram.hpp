#pragma once

#include "dqs/scenario.hpp"

#include <string>

namespace dqs {

/// Space-time diagram: one horizontal wire per qubit, one box per action
/// spanning its register over its interval; measurement branchings fork
/// into stacked alternatives.
std::string render_ascii(const Scenario& sc);
std::string render_svg(const Scenario& sc);

}  // namespace dqs
