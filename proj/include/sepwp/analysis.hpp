#pragma once

// Sampled approximate solution sets and epsilon sweeps.
//
// S(eps) is the union over p in B(p*, eps) of the pairs (z, w) with
//   d(z, C) <= eps, d(w, Q) <= eps, |w - A z| <= eps,
//   f~(p, z, x) >= -eps for all x in C, g~(p, w, y) >= -eps for all y in Q.
//
// The sampled set keeps the candidate lattice points that pass all five
// conditions for some parameter of the ball lattice, with the inner
// quantifiers replaced by minima over a grid of C and Q.
//
// Candidate lattice: along axis i of E1 the nodes are C.lower[i] + k * h,
// k integer (likewise for E2 anchored at Q.lower). The lattice does not
// depend on eps, so sets computed at different eps are directly comparable.
//
// Parameter lattice: p* + k * h_param for integer vectors k with
// |k * h_param| <= min(eps, m_radius), ordered by |k| and then
// lexicographically. Smaller balls therefore give prefixes of larger ones.

#include "sepwp/geometry.hpp"
#include "sepwp/problem.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sepwp::analysis {

using geometry::Point;
using geometry::PointCloud;
using problem::PerturbedSEP;

struct SamplingPlan {
    double h_candidate = 0.01;
    double h_inner = 0.01;
    double h_param = 0.01;
    double eps_floor = 0.01;

    void validate() const;
};

struct ApproxSolutionSet {
    double eps = 0.0;
    PointCloud members{0};        // concatenated (z, w), dimension dim1 + dim2
    PointCloud witness_params{0}; // one parameter per member
    SamplingPlan plan;
};

struct Membership {
    bool member = false;
    Point witness; // empty unless member
};

/// Parameter lattice of B(p*, radius), in the documented order.
PointCloud parameter_grid(const PerturbedSEP& inst, double h_param, double radius);

Membership membership(const PerturbedSEP& inst, const SamplingPlan& plan, double eps, std::span<const double> z,
                      std::span<const double> w);

/// Shares residual tables across every eps <= eps_max.
class ApproxSetBuilder {
public:
    ApproxSetBuilder(const PerturbedSEP& inst, const SamplingPlan& plan, double eps_max, std::size_t threads = 0);
    ~ApproxSetBuilder();
    ApproxSetBuilder(ApproxSetBuilder&&) noexcept;
    ApproxSetBuilder& operator=(ApproxSetBuilder&&) noexcept;

    ApproxSolutionSet compute(double eps) const;
    double eps_max() const noexcept;

private:
    struct Tables;
    std::unique_ptr<Tables> t_;
};

ApproxSolutionSet compute_S_eps(const PerturbedSEP& inst, const SamplingPlan& plan, double eps,
                                std::size_t threads = 0);

/// Members of the sampled set at eps_floor; an outer approximation of the
/// solution set.
PointCloud solution_floor(const PerturbedSEP& inst, const SamplingPlan& plan, std::size_t threads = 0);

enum class Classification { LPWellPosed, GeneralizedLPWellPosed, NoSolutionDetected, Inconclusive };

const char* to_string(Classification c);

struct Thresholds {
    double tau_point = 0.0;
    double tau_cluster = 0.0;

    /// Both thresholds equal to 5 * h_candidate.
    static Thresholds defaults(const SamplingPlan& plan);
};

struct SweepRecord {
    double eps = 0.0;
    std::size_t count = 0;
    std::optional<double> diam;
    std::optional<double> hausdorff_to_floor;
    std::optional<double> mu_hat;
    double wallclock_ms = 0.0;
    bool is_floor = false;
};

struct SweepOptions {
    std::size_t kuratowski_k = 2;
    std::optional<Thresholds> thresholds; // defaults from the plan when unset
    std::size_t threads = 0;
};

struct SweepResult {
    std::vector<double> eps_list;     // the requested schedule
    std::vector<SweepRecord> records; // schedule records, then the floor record if eps_floor is below them
    ApproxSolutionSet floor_set;
    std::size_t kuratowski_k = 2;
    Thresholds thresholds;
    Classification classification = Classification::Inconclusive;
};

/// Schedule must be strictly decreasing with its last entry >= eps_floor.
SweepResult sweep(const PerturbedSEP& inst, const SamplingPlan& plan, const std::vector<double>& eps_schedule,
                  const SweepOptions& opt = {});

/// Decision rule on the records, read from largest to smallest eps:
///   NoSolutionDetected     floor set empty
///   LPWellPosed            diam nonincreasing and diam at the smallest eps <= tau_point
///   GeneralizedLPWellPosed hausdorff_to_floor and mu_hat nonincreasing, both <= tau_cluster
///                          at the smallest eps
///   Inconclusive           otherwise
/// Throws if fewer than three records are nonempty.
Classification classify(const SweepResult& sweep, double tau_point, double tau_cluster);

/// start, start * factor, ..., `steps` values in total.
std::vector<double> geometric_schedule(double start, double factor, std::size_t steps);

} // namespace sepwp::analysis
