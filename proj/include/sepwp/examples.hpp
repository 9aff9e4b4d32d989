#pragma once

// Bundled worked instances.
//
//   ex1: C = Q = [-1, 0], A = I, p* = 0, M = [-1, 1],
//        f~ = (z - x)(p^2 + 2), g~ = w - y. Unique solution (0, 0).
//   ex2: C = Q = [-2, 2], A = I, p* = 1, M = [0, 2],
//        f~ = (x^2 - p)^2 - (z^2 - p)^2, g~ likewise. Solutions (-1, -1), (1, 1).

#include <json.hpp>

#include <string>
#include <vector>

namespace sepwp::examples {

std::vector<std::string> names();
bool known(const std::string& name);

/// Problem config document. Throws std::invalid_argument for unknown names.
nlohmann::json config(const std::string& name);

/// Known solution set, classification and sweep settings for the instance.
nlohmann::json expected(const std::string& name);

/// Hand-built approximating sequence for ex1:
/// x_n = y_n = -1/n, p_n = 1/n, eps_n = eps_scale / n, n = 1..count.
nlohmann::json ex1_sequence(double eps_scale = 3.0, std::size_t count = 50);

} // namespace sepwp::examples
