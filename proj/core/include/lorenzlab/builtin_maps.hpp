#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lorenzlab/lorenz_map.hpp"

namespace lorenzlab {

// Left a_left x (1 - x), right 1 - a_right x (1 - x), c = 1/2.
[[nodiscard]] LorenzMapSpec quadratic_pair(double a_left, double a_right);

// "paper-example"     quadratic_pair(3.4, 4.0)
// "logistic4-embed"   embedding of 4x(1-x)
// "logistic3.4-embed" embedding of 3.4x(1-x)
[[nodiscard]] std::optional<LorenzMapSpec> builtin_map(std::string_view name);
[[nodiscard]] std::vector<std::string> builtin_names();

}  // namespace lorenzlab
