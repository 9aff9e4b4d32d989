#pragma once

// Perturbed split equilibrium problem over boxes:
//
//   find z in C, w = A z in Q with
//     f~(p, z, x) >= 0 for all x in C,
//     g~(p, w, y) >= 0 for all y in Q,
//
// where p ranges over the closed ball M = B(p*, m_radius). The nominal
// problem is the one at p = p*.

#include "sepwp/expr.hpp"
#include "sepwp/geometry.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sepwp::problem {

using geometry::Box;
using geometry::LinearOperator;
using geometry::Point;
using geometry::PointCloud;

/// Which bifunction: f~ acts on E1 over C, g~ on E2 over Q.
enum class Role { F, G };

const char* role_name(Role r);

class PerturbedSEP {
public:
    PerturbedSEP(std::size_t dim1, std::size_t dim2, std::size_t pdim, Box c, Box q, LinearOperator a,
                 expr::Expression f_tilde, expr::Expression g_tilde, Point p_star, double m_radius);

    std::size_t dim1() const noexcept { return dim1_; }
    std::size_t dim2() const noexcept { return dim2_; }
    std::size_t pdim() const noexcept { return pdim_; }
    const Box& C() const noexcept { return c_; }
    const Box& Q() const noexcept { return q_; }
    const LinearOperator& A() const noexcept { return a_; }
    const expr::Expression& f_tilde() const noexcept { return f_; }
    const expr::Expression& g_tilde() const noexcept { return g_; }
    const Point& p_star() const noexcept { return p_star_; }
    double m_radius() const noexcept { return m_radius_; }

    const Box& domain(Role r) const noexcept { return r == Role::F ? c_ : q_; }
    const expr::Expression& bifunction(Role r) const noexcept { return r == Role::F ? f_ : g_; }
    std::size_t dim(Role r) const noexcept { return r == Role::F ? dim1_ : dim2_; }

    /// |p - p*| <= m_radius, with 1e-12 slack.
    bool in_M(std::span<const double> p) const;

    double f(std::span<const double> p, std::span<const double> z, std::span<const double> x) const;
    double g(std::span<const double> p, std::span<const double> w, std::span<const double> y) const;

private:
    std::size_t dim1_;
    std::size_t dim2_;
    std::size_t pdim_;
    Box c_;
    Box q_;
    LinearOperator a_;
    expr::Expression f_;
    expr::Expression g_;
    Point p_star_;
    double m_radius_;
};

/// Evaluates `e` as a bifunction of the given role: first argument binds
/// z (or w), second binds x (or y).
double eval_bifunction(const expr::Expression& e, Role role, std::span<const double> p,
                       std::span<const double> first, std::span<const double> second);

/// Violations of the five conditions defining the approximate solution set.
struct Residual {
    double r_f = 0.0;    // max over the inner grid of -f~(p, z, x)
    double r_g = 0.0;    // max over the inner grid of -g~(p, w, y)
    double r_link = 0.0; // |w - A z|
    double r_C = 0.0;    // d(z, C)
    double r_Q = 0.0;    // d(w, Q)

    double max() const;
    bool within(double eps) const { return max() <= eps; }
};

/// Residual evaluation with the inner quantifier grids built once.
class ResidualEvaluator {
public:
    ResidualEvaluator(const PerturbedSEP& inst, double h_inner);

    double r_f(std::span<const double> p, std::span<const double> z) const;
    double r_g(std::span<const double> p, std::span<const double> w) const;
    double r_link(std::span<const double> z, std::span<const double> w) const;
    Residual operator()(std::span<const double> p, std::span<const double> z, std::span<const double> w) const;

    const PerturbedSEP& instance() const noexcept { return *inst_; }
    const PointCloud& inner_grid(Role r) const noexcept { return r == Role::F ? grid_c_ : grid_q_; }
    double h_inner() const noexcept { return h_inner_; }

private:
    const PerturbedSEP* inst_;
    double h_inner_;
    PointCloud grid_c_;
    PointCloud grid_q_;
};

/// Throws std::invalid_argument when p lies outside M or h_inner <= 0.
Residual residual(const PerturbedSEP& inst, std::span<const double> p, std::span<const double> z,
                  std::span<const double> w, double h_inner);

// ============================================================================
// Sampled hypothesis checks. These are evidence, not proofs.
// ============================================================================

struct CheckOptions {
    std::size_t n_samples = 1000;
    std::uint64_t seed = 1;
    double tol = 1e-9;
};

struct CheckResult {
    bool passed = true;
    double worst = 0.0;
    std::size_t samples = 0;
    // Arguments at which `worst` was attained.
    Point witness_p;
    Point witness_first;
    Point witness_second;
};

/// f~(p, a, b) + f~(p, b, a) <= tol for p in M and a, b in the role's box.
/// `worst` is the largest sum seen.
CheckResult check_monotone(const expr::Expression& e, Role role, const PerturbedSEP& inst, const CheckOptions& opt);

/// f~(p*, a, a) >= -tol. `worst` is the smallest diagonal value seen.
CheckResult check_diag_nonneg(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                              const CheckOptions& opt);

/// Midpoint convexity in the second slot:
/// f~(p, z, (a+b)/2) <= (f~(p, z, a) + f~(p, z, b)) / 2 + tol.
/// `worst` is the largest midpoint gap.
CheckResult check_convex_third(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                               const CheckOptions& opt);

std::vector<double> default_t_grid();

/// Upper semicontinuity of t -> f~(p*, a + t (b - a), b) at 0+. The gap at the
/// smallest t, less half the gap at the next t, must stay <= tol; `worst` is
/// the largest such score.
CheckResult check_hemicontinuity(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                                 const CheckOptions& opt, const std::vector<double>& t_grid);

struct MintyResult {
    bool passed = false;
    std::size_t mismatches = 0;   // size of the symmetric difference
    std::size_t primal_count = 0; // {a : f(a, x) >= -tol for all grid x}
    std::size_t dual_count = 0;   // {a : f(x, a) <= tol for all grid x}
    std::size_t grid_size = 0;
    bool hypotheses_hold = false; // monotone and nonnegative diagonal on the grid
    std::string warning;
    std::vector<std::size_t> primal;
    std::vector<std::size_t> dual;
};

/// Compares the two grid solution sets of the role's bifunction at p*.
MintyResult check_minty(const PerturbedSEP& inst, Role role, double h, double tol);

struct PropertyReport {
    CheckResult monotone_f, monotone_g;
    CheckResult diag_nonneg_f, diag_nonneg_g;
    CheckResult convex_third_f, convex_third_g;
    CheckResult hemicontinuity_f, hemicontinuity_g;
    MintyResult minty_f;
    std::size_t samples_used = 0;
    std::uint64_t seed = 0;

    bool all_passed() const;
};

PropertyReport property_report(const PerturbedSEP& inst, const CheckOptions& opt, double minty_h);

} // namespace sepwp::problem
