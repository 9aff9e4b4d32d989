#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library's geometry or analysis code.

#include "sepwp/config.hpp"
#include "sepwp/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Pt = std::vector<double>;
using Cloud = std::vector<Pt>;

inline double dist(const Pt& a, const Pt& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline double diameter(const Cloud& a)
{
    double d = 0.0;
    for (const auto& x : a)
        for (const auto& y : a)
            d = std::max(d, dist(x, y));
    return d;
}

inline double directed(const Cloud& a, const Cloud& b)
{
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b)
            best = std::min(best, dist(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

inline double hausdorff(const Cloud& a, const Cloud& b)
{
    return std::max(directed(a, b), directed(b, a));
}

/// Exact min over all labelings into at most k parts of the largest part
/// diameter. k^n labelings, so keep n small.
inline double partition_measure(const Cloud& a, std::size_t k)
{
    const std::size_t n = a.size();
    if (n == 0)
        return 0.0;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i)
        total *= k;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> label(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            label[i] = c % k;
            c /= k;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < best; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (label[i] == label[j])
                    worst = std::max(worst, dist(a[i], a[j]));
        best = std::min(best, worst);
    }
    return best;
}

inline Cloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Cloud c(n, Pt(dim));
    for (auto& p : c)
        for (auto& v : p)
            v = u(rng);
    return c;
}

inline sepwp::geometry::PointCloud to_cloud(const Cloud& c, std::size_t dim)
{
    sepwp::geometry::PointCloud out(dim);
    for (const auto& p : c)
        out.push_back(p);
    return out;
}

inline Cloud from_cloud(const sepwp::geometry::PointCloud& c)
{
    Cloud out;
    for (std::size_t i = 0; i < c.size(); ++i)
        out.emplace_back(c[i].begin(), c[i].end());
    return out;
}

inline sepwp::cli::ProblemConfig example(const std::string& name)
{
    return sepwp::cli::parse_config(sepwp::examples::config(name));
}

/// ex1 membership of (z, w) in the sampled set. The inner minima sit at x = 0
/// and y = 0, which are grid nodes, and -eps / (p^2 + 2) is loosest at p = 0,
/// which is always a lattice parameter, so
///   z >= -eps / 2, w >= -eps, z <= eps, w <= eps,
///   z >= -1 - eps, w >= -1 - eps, |w - z| <= eps.
/// Returns +1 (inside), -1 (outside) or 0 (within `margin` of a boundary).
inline int ex1_member(double z, double w, double eps, double margin = 1e-9)
{
    const double slack[] = {
        -eps / 2.0 - z, -eps - w, z - eps, w - eps, -1.0 - eps - z, -1.0 - eps - w, std::abs(w - z) - eps,
    };
    const double worst = *std::max_element(std::begin(slack), std::end(slack));
    if (worst > margin)
        return -1;
    if (worst < -margin)
        return 1;
    return 0;
}

/// Interval bounds of the exact ex2 approximate set on each coordinate:
/// z^2 in [1 - eps - sqrt(eps), 1 + eps + sqrt(eps)], and |z - w| <= eps.
struct Ex2Strip {
    double inner;
    double outer;
};

inline Ex2Strip ex2_strip(double eps)
{
    const double lo = 1.0 - eps - std::sqrt(eps);
    return {std::sqrt(std::max(lo, 0.0)), std::sqrt(1.0 + eps + std::sqrt(eps))};
}

/// Distance from (z, w) to the nearer of (1, 1) and (-1, -1).
inline double ex2_solution_distance(double z, double w)
{
    return std::min(std::hypot(z - 1.0, w - 1.0), std::hypot(z + 1.0, w + 1.0));
}

} // namespace oracle
