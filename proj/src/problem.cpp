#include "sepwp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace sepwp::problem {

using geometry::distance;
using geometry::distance_to_box;

const char* role_name(Role r)
{
    return r == Role::F ? "f_tilde" : "g_tilde";
}

namespace {

void check_vars(const expr::Expression& e, const char* key, expr::Namespace first, expr::Namespace second,
                std::size_t dim, std::size_t pdim)
{
    for (const auto& v : e.free_vars()) {
        const auto idx = static_cast<std::size_t>(v.index);
        if (v.ns == expr::Namespace::P) {
            if (idx > pdim)
                throw std::invalid_argument(std::string(key) + ": " + v.name() + " exceeds pdim " +
                                            std::to_string(pdim));
        } else if (v.ns == first || v.ns == second) {
            if (idx > dim)
                throw std::invalid_argument(std::string(key) + ": " + v.name() + " exceeds dimension " +
                                            std::to_string(dim));
        } else {
            throw std::invalid_argument(std::string(key) + ": variable " + v.name() + " is not allowed here");
        }
    }
}

} // namespace

PerturbedSEP::PerturbedSEP(std::size_t dim1, std::size_t dim2, std::size_t pdim, Box c, Box q, LinearOperator a,
                           expr::Expression f_tilde, expr::Expression g_tilde, Point p_star, double m_radius)
    : dim1_(dim1), dim2_(dim2), pdim_(pdim), c_(std::move(c)), q_(std::move(q)), a_(std::move(a)),
      f_(std::move(f_tilde)), g_(std::move(g_tilde)), p_star_(std::move(p_star)), m_radius_(m_radius)
{
    if (dim1_ == 0 || dim2_ == 0 || pdim_ == 0)
        throw std::invalid_argument("dimensions must be positive");
    if (c_.dim() != dim1_)
        throw std::invalid_argument("C: dimension does not match dim1");
    if (q_.dim() != dim2_)
        throw std::invalid_argument("Q: dimension does not match dim2");
    if (a_.rows() != dim2_ || a_.cols() != dim1_)
        throw std::invalid_argument("A: must be dim2 x dim1");
    if (p_star_.size() != pdim_)
        throw std::invalid_argument("p_star: length does not match pdim");
    if (!(m_radius_ > 0.0) || !std::isfinite(m_radius_))
        throw std::invalid_argument("m_radius: must be positive");
    if (f_.empty() || g_.empty())
        throw std::invalid_argument("bifunction expressions must be nonempty");
    check_vars(f_, "f_tilde", expr::Namespace::Z, expr::Namespace::X, dim1_, pdim_);
    check_vars(g_, "g_tilde", expr::Namespace::W, expr::Namespace::Y, dim2_, pdim_);
}

bool PerturbedSEP::in_M(std::span<const double> p) const
{
    return p.size() == pdim_ && distance(p, p_star_) <= m_radius_ + 1e-12;
}

double PerturbedSEP::f(std::span<const double> p, std::span<const double> z, std::span<const double> x) const
{
    return eval_bifunction(f_, Role::F, p, z, x);
}

double PerturbedSEP::g(std::span<const double> p, std::span<const double> w, std::span<const double> y) const
{
    return eval_bifunction(g_, Role::G, p, w, y);
}

double eval_bifunction(const expr::Expression& e, Role role, std::span<const double> p,
                       std::span<const double> first, std::span<const double> second)
{
    expr::Bindings b;
    b.p = p;
    if (role == Role::F) {
        b.z = first;
        b.x = second;
    } else {
        b.w = first;
        b.y = second;
    }
    return e.evaluate(b);
}

// ============================================================================
// Residuals
// ============================================================================

double Residual::max() const
{
    return std::max({r_f, r_g, r_link, r_C, r_Q});
}

ResidualEvaluator::ResidualEvaluator(const PerturbedSEP& inst, double h_inner)
    : inst_(&inst), h_inner_(h_inner), grid_c_(geometry::grid_sample(inst.C(), h_inner)),
      grid_q_(geometry::grid_sample(inst.Q(), h_inner))
{
}

double ResidualEvaluator::r_f(std::span<const double> p, std::span<const double> z) const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_c_.size(); ++i)
        worst = std::max(worst, -inst_->f(p, z, grid_c_[i]));
    return worst;
}

double ResidualEvaluator::r_g(std::span<const double> p, std::span<const double> w) const
{
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_q_.size(); ++i)
        worst = std::max(worst, -inst_->g(p, w, grid_q_[i]));
    return worst;
}

double ResidualEvaluator::r_link(std::span<const double> z, std::span<const double> w) const
{
    return distance(w, geometry::apply_operator(inst_->A(), z));
}

Residual ResidualEvaluator::operator()(std::span<const double> p, std::span<const double> z,
                                       std::span<const double> w) const
{
    Residual r;
    r.r_f = r_f(p, z);
    r.r_g = r_g(p, w);
    r.r_link = r_link(z, w);
    r.r_C = distance_to_box(z, inst_->C());
    r.r_Q = distance_to_box(w, inst_->Q());
    return r;
}

Residual residual(const PerturbedSEP& inst, std::span<const double> p, std::span<const double> z,
                  std::span<const double> w, double h_inner)
{
    if (!inst.in_M(p))
        throw std::invalid_argument("residual: parameter lies outside M");
    if (!(h_inner > 0.0))
        throw std::invalid_argument("residual: h_inner must be positive");
    return ResidualEvaluator(inst, h_inner)(p, z, w);
}

// ============================================================================
// Samplers
// ============================================================================

namespace {

// Uniform in the box, except each coordinate lands on the lower or upper face
// with probability 1/8 each so that boundary behaviour is exercised.
Point sample_box(std::mt19937_64& rng, const Box& box)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point x(box.dim());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = unit(rng);
        const double lo = box.lower()[i];
        const double hi = box.upper()[i];
        if (u < 0.125)
            x[i] = lo;
        else if (u < 0.25)
            x[i] = hi;
        else
            x[i] = lo + unit(rng) * (hi - lo);
    }
    return x;
}

Point sample_ball(std::mt19937_64& rng, const Point& center, double radius)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t d = center.size();
    Point dir(d);
    double n = 0.0;
    do {
        for (auto& v : dir)
            v = gauss(rng);
        n = geometry::norm(dir);
    } while (n == 0.0);
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
    Point p(d);
    for (std::size_t i = 0; i < d; ++i)
        p[i] = center[i] + r * dir[i] / n;
    return p;
}

void require_samples(const CheckOptions& opt)
{
    if (opt.n_samples == 0)
        throw std::invalid_argument("n_samples must be at least 1");
}

} // namespace

CheckResult check_monotone(const expr::Expression& e, Role role, const PerturbedSEP& inst, const CheckOptions& opt)
{
    require_samples(opt);
    std::mt19937_64 rng(opt.seed);
    const Box& box = inst.domain(role);
    CheckResult res;
    res.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < opt.n_samples; ++s) {
        const Point p = sample_ball(rng, inst.p_star(), inst.m_radius());
        const Point a = sample_box(rng, box);
        const Point b = sample_box(rng, box);
        const double sum = eval_bifunction(e, role, p, a, b) + eval_bifunction(e, role, p, b, a);
        if (sum > res.worst) {
            res.worst = sum;
            res.witness_p = p;
            res.witness_first = a;
            res.witness_second = b;
        }
    }
    res.samples = opt.n_samples;
    res.passed = res.worst <= opt.tol;
    return res;
}

CheckResult check_diag_nonneg(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                              const CheckOptions& opt)
{
    require_samples(opt);
    std::mt19937_64 rng(opt.seed);
    const Box& box = inst.domain(role);
    CheckResult res;
    res.worst = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < opt.n_samples; ++s) {
        const Point a = sample_box(rng, box);
        const double v = eval_bifunction(e, role, inst.p_star(), a, a);
        if (v < res.worst) {
            res.worst = v;
            res.witness_p = inst.p_star();
            res.witness_first = a;
            res.witness_second = a;
        }
    }
    res.samples = opt.n_samples;
    res.passed = res.worst >= -opt.tol;
    return res;
}

CheckResult check_convex_third(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                               const CheckOptions& opt)
{
    require_samples(opt);
    std::mt19937_64 rng(opt.seed);
    const Box& box = inst.domain(role);
    CheckResult res;
    res.worst = -std::numeric_limits<double>::infinity();
    Point mid(box.dim());
    for (std::size_t s = 0; s < opt.n_samples; ++s) {
        const Point p = sample_ball(rng, inst.p_star(), inst.m_radius());
        const Point z = sample_box(rng, box);
        const Point a = sample_box(rng, box);
        const Point b = sample_box(rng, box);
        for (std::size_t i = 0; i < mid.size(); ++i)
            mid[i] = 0.5 * (a[i] + b[i]);
        const double gap = eval_bifunction(e, role, p, z, mid) -
                           0.5 * (eval_bifunction(e, role, p, z, a) + eval_bifunction(e, role, p, z, b));
        if (gap > res.worst) {
            res.worst = gap;
            res.witness_p = p;
            res.witness_first = a;
            res.witness_second = b;
        }
    }
    res.samples = opt.n_samples;
    res.passed = res.worst <= opt.tol;
    return res;
}

std::vector<double> default_t_grid()
{
    return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
}

CheckResult check_hemicontinuity(const expr::Expression& e, Role role, const PerturbedSEP& inst,
                                 const CheckOptions& opt, const std::vector<double>& t_grid)
{
    require_samples(opt);
    if (t_grid.empty())
        throw std::invalid_argument("t_grid must be nonempty");
    std::vector<double> ts(t_grid);
    std::sort(ts.begin(), ts.end(), std::greater<>());
    if (!(ts.back() > 0.0))
        throw std::invalid_argument("t_grid entries must be positive");

    // A continuous bifunction has gaps that shrink with t; a jump at 0+ leaves
    // a gap that does not. Score = gap at the smallest t minus half the gap at
    // the next larger t, so O(t) or O(sqrt t) decay scores <= 0.
    std::mt19937_64 rng(opt.seed);
    const Box& box = inst.domain(role);
    const Point& ps = inst.p_star();
    CheckResult res;
    res.worst = -std::numeric_limits<double>::infinity();
    Point moved(box.dim());
    auto gap_at = [&](double t, const Point& a, const Point& b, double base) {
        for (std::size_t i = 0; i < moved.size(); ++i)
            moved[i] = a[i] + t * (b[i] - a[i]);
        return eval_bifunction(e, role, ps, moved, b) - base;
    };
    for (std::size_t s = 0; s < opt.n_samples; ++s) {
        const Point a = sample_box(rng, box);
        const Point b = sample_box(rng, box);
        const double base = eval_bifunction(e, role, ps, a, b);
        const double last = gap_at(ts.back(), a, b, base);
        const double prev = ts.size() > 1 ? gap_at(ts[ts.size() - 2], a, b, base) : 0.0;
        const double score = last - 0.5 * std::max(prev, 0.0);
        if (score > res.worst) {
            res.worst = score;
            res.witness_p = ps;
            res.witness_first = a;
            res.witness_second = b;
        }
    }
    res.samples = opt.n_samples;
    res.passed = res.worst <= opt.tol;
    return res;
}

MintyResult check_minty(const PerturbedSEP& inst, Role role, double h, double tol)
{
    const PointCloud grid = geometry::grid_sample(inst.domain(role), h);
    const expr::Expression& e = inst.bifunction(role);
    const std::size_t n = grid.size();

    // values[i * n + j] = f(p*, grid_i, grid_j)
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            values[i * n + j] = eval_bifunction(e, role, inst.p_star(), grid[i], grid[j]);

    MintyResult res;
    res.grid_size = n;
    double worst_sum = -std::numeric_limits<double>::infinity();
    double worst_diag = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        worst_diag = std::min(worst_diag, values[i * n + i]);
        for (std::size_t j = i; j < n; ++j)
            worst_sum = std::max(worst_sum, values[i * n + j] + values[j * n + i]);
    }
    res.hypotheses_hold = worst_sum <= tol && worst_diag >= -tol;
    if (!res.hypotheses_hold)
        res.warning = "monotonicity or diagonal nonnegativity fails on the grid (worst sum " +
                      std::to_string(worst_sum) + ", worst diagonal " + std::to_string(worst_diag) +
                      "); comparison is informational";

    for (std::size_t i = 0; i < n; ++i) {
        bool primal = true;
        bool dual = true;
        for (std::size_t j = 0; j < n && (primal || dual); ++j) {
            if (values[i * n + j] < -tol)
                primal = false;
            if (values[j * n + i] > tol)
                dual = false;
        }
        if (primal)
            res.primal.push_back(i);
        if (dual)
            res.dual.push_back(i);
        if (primal != dual)
            ++res.mismatches;
    }
    res.primal_count = res.primal.size();
    res.dual_count = res.dual.size();
    res.passed = res.mismatches == 0;
    return res;
}

bool PropertyReport::all_passed() const
{
    return monotone_f.passed && monotone_g.passed && diag_nonneg_f.passed && diag_nonneg_g.passed &&
           convex_third_f.passed && convex_third_g.passed && hemicontinuity_f.passed && hemicontinuity_g.passed &&
           minty_f.passed;
}

PropertyReport property_report(const PerturbedSEP& inst, const CheckOptions& opt, double minty_h)
{
    PropertyReport r;
    const auto t_grid = default_t_grid();
    const auto& f = inst.f_tilde();
    const auto& g = inst.g_tilde();
    r.monotone_f = check_monotone(f, Role::F, inst, opt);
    r.monotone_g = check_monotone(g, Role::G, inst, opt);
    r.diag_nonneg_f = check_diag_nonneg(f, Role::F, inst, opt);
    r.diag_nonneg_g = check_diag_nonneg(g, Role::G, inst, opt);
    r.convex_third_f = check_convex_third(f, Role::F, inst, opt);
    r.convex_third_g = check_convex_third(g, Role::G, inst, opt);
    r.hemicontinuity_f = check_hemicontinuity(f, Role::F, inst, opt, t_grid);
    r.hemicontinuity_g = check_hemicontinuity(g, Role::G, inst, opt, t_grid);
    r.minty_f = check_minty(inst, Role::F, minty_h, 2.0 * minty_h);
    r.samples_used = opt.n_samples;
    r.seed = opt.seed;
    return r;
}

} // namespace sepwp::problem
