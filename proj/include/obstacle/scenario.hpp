#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "obstacle/config.hpp"

namespace obstacle {

std::vector<std::string> builtin_scenario_names();

// Throws std::invalid_argument listing the known names when asked for an
// unknown one.
ScenarioConfig builtin_scenario(const std::string& name);

// Exact solution, for the builtins that have one in closed form.
std::optional<std::function<double(double, double)>>
closed_form_solution(const std::string& name);

} // namespace obstacle
