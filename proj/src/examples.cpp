#include "sepwp/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace sepwp::examples {

using nlohmann::json;

std::vector<std::string> names()
{
    return {"ex1", "ex2"};
}

bool known(const std::string& name)
{
    return name == "ex1" || name == "ex2";
}

json config(const std::string& name)
{
    if (name == "ex1") {
        return {
            {"dim1", 1},
            {"dim2", 1},
            {"pdim", 1},
            {"C", {{-1.0, 0.0}}},
            {"Q", {{-1.0, 0.0}}},
            {"A", {{1.0}}},
            {"f_tilde", "(z1 - x1) * (p1^2 + 2)"},
            {"g_tilde", "w1 - y1"},
            {"p_star", {0.0}},
            {"m_radius", 1.0},
            {"plan", {{"h_candidate", 0.005}, {"h_inner", 0.005}, {"h_param", 0.005}, {"eps_floor", 0.005}}},
            {"kuratowski_k", 2},
        };
    }
    if (name == "ex2") {
        return {
            {"dim1", 1},
            {"dim2", 1},
            {"pdim", 1},
            {"C", {{-2.0, 2.0}}},
            {"Q", {{-2.0, 2.0}}},
            {"A", {{1.0}}},
            {"f_tilde", "(x1^2 - p1)^2 - (z1^2 - p1)^2"},
            {"g_tilde", "(y1^2 - p1)^2 - (w1^2 - p1)^2"},
            {"p_star", {1.0}},
            {"m_radius", 1.0},
            {"plan", {{"h_candidate", 0.01}, {"h_inner", 0.01}, {"h_param", 0.01}, {"eps_floor", 0.02}}},
            {"kuratowski_k", 2},
            // Cluster spread of S(eps) shrinks like sqrt(eps), so the
            // 5 * h_candidate default is far below what eps_floor = 0.02 allows.
            {"thresholds", {{"tau_point", 0.05}, {"tau_cluster", 0.25}}},
        };
    }
    throw std::invalid_argument("unknown example '" + name + "' (expected ex1 or ex2)");
}

json expected(const std::string& name)
{
    if (name == "ex1") {
        return {
            {"solution_set", {{0.0, 0.0}}},
            {"approx_set_bound", "S(eps) within [-eps/2, eps] x [-eps, eps]"},
            {"diam_bound_per_eps", 2.5},
            {"sweep", {{"eps_start", 0.2}, {"factor", 0.5}, {"steps", 4}}},
            {"classification", "LPWellPosed"},
        };
    }
    if (name == "ex2") {
        return {
            {"solution_set", {{-1.0, -1.0}, {1.0, 1.0}}},
            {"diam_limit", 2.0 * std::sqrt(2.0)},
            {"sweep", {{"eps_start", 0.2}, {"factor", 0.5}, {"steps", 3}}},
            {"classification", "GeneralizedLPWellPosed"},
        };
    }
    throw std::invalid_argument("unknown example '" + name + "' (expected ex1 or ex2)");
}

json ex1_sequence(double eps_scale, std::size_t count)
{
    json out = json::array();
    for (std::size_t n = 1; n <= count; ++n) {
        const double inv = 1.0 / static_cast<double>(n);
        out.push_back({{"n", n}, {"p", {inv}}, {"x", {-inv}}, {"y", {-inv}}, {"eps", eps_scale * inv}});
    }
    return out;
}

} // namespace sepwp::examples
