#pragma once

// Approximating sequences. A finite list of steps can only be checked as a
// prefix of an infinite sequence, so a passing report means
// "prefix-consistent", not "is an approximating sequence".

#include "sepwp/analysis.hpp"
#include "sepwp/problem.hpp"

#include <string>
#include <vector>

namespace sepwp::sequences {

using geometry::Point;
using geometry::PointCloud;
using problem::PerturbedSEP;

enum class Mode {
    Approximating, // x_n in C, y_n in Q exactly
    Generalized    // d(x_n, C) <= eps_n, d(y_n, Q) <= eps_n
};

const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

struct SequenceStep {
    std::size_t n = 1;
    Point p;
    Point x;
    Point y;
    double eps = 0.0;
};

/// Signed slack of every condition at one step; positive means violated.
struct StepCheck {
    std::size_t n = 0;
    double x_in_C = 0.0;
    double y_in_Q = 0.0;
    double link = 0.0;
    double f_tilde = 0.0;
    double g_tilde = 0.0;
    double p_in_M = 0.0; // |p_n - p*| - m_radius
    std::vector<std::string> violated;
};

struct VerificationReport {
    Mode mode = Mode::Approximating;
    std::vector<StepCheck> steps;
    bool eps_nonincreasing = true;
    bool param_nonincreasing = true;
    bool passed = false;
    std::vector<std::string> diagnostics;
    std::vector<double> tail_convergence; // distance to the floor set per step, when given

    /// Names of violated conditions in first-occurrence order.
    std::vector<std::string> violated_conditions() const;
};

/// Throws std::invalid_argument for an empty list, non-consecutive indices,
/// nonpositive eps or dimension mismatches. A parameter outside M is
/// reported as a failing step, not thrown.
VerificationReport verify(const PerturbedSEP& inst, const std::vector<SequenceStep>& steps, Mode mode,
                          double h_inner, double tol, const PointCloud* floor = nullptr);

/// h_candidate * sqrt(dim1 + dim2): distance from any point to the nearest
/// candidate lattice node is at most half of this.
double lattice_slack(const PerturbedSEP& inst, const analysis::SamplingPlan& plan);

/// For each eps_n, picks the member of the sampled S(eps_n) nearest to the
/// previous iterate (first in lattice order on ties) and its witness
/// parameter. eps of each step is eps_n + lattice_slack. `start` is a point
/// of R^(dim1 + dim2). Throws std::runtime_error naming eps_n when a
/// sampled set is empty.
std::vector<SequenceStep> generate(const PerturbedSEP& inst, const analysis::SamplingPlan& plan,
                                   const std::vector<double>& eps_schedule, std::span<const double> start,
                                   std::size_t threads = 0);

/// d((x_n, y_n), floor) per step. Throws if floor is empty.
std::vector<double> convergence_profile(const std::vector<SequenceStep>& steps, const PointCloud& floor);

} // namespace sepwp::sequences
