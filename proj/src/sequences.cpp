#include "sepwp/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sepwp::sequences {

const char* to_string(Mode m)
{
    return m == Mode::Approximating ? "approximating" : "generalized";
}

Mode parse_mode(const std::string& s)
{
    if (s == "approximating")
        return Mode::Approximating;
    if (s == "generalized")
        return Mode::Generalized;
    throw std::invalid_argument("mode must be 'approximating' or 'generalized'");
}

std::vector<std::string> VerificationReport::violated_conditions() const
{
    std::vector<std::string> out;
    for (const auto& s : steps)
        for (const auto& v : s.violated)
            if (std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(v);
    if (!eps_nonincreasing)
        out.push_back("eps_nonincreasing");
    if (!param_nonincreasing)
        out.push_back("p_nonincreasing");
    return out;
}

namespace {

Point concat(const Point& x, const Point& y)
{
    Point out(x);
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

void validate_steps(const PerturbedSEP& inst, const std::vector<SequenceStep>& steps)
{
    if (steps.empty())
        throw std::invalid_argument("sequence is empty");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        if (i > 0 && s.n != steps[i - 1].n + 1)
            throw std::invalid_argument("step indices must be consecutive (step " + std::to_string(s.n) + ")");
        if (s.p.size() != inst.pdim() || s.x.size() != inst.dim1() || s.y.size() != inst.dim2())
            throw std::invalid_argument("step " + std::to_string(s.n) + ": dimension mismatch");
        if (!(s.eps > 0.0))
            throw std::invalid_argument("step " + std::to_string(s.n) + ": eps must be positive");
    }
}

} // namespace

VerificationReport verify(const PerturbedSEP& inst, const std::vector<SequenceStep>& steps, Mode mode,
                          double h_inner, double tol, const PointCloud* floor)
{
    validate_steps(inst, steps);
    const problem::ResidualEvaluator eval(inst, h_inner);

    VerificationReport rep;
    rep.mode = mode;
    double prev_eps = std::numeric_limits<double>::infinity();
    double prev_dp = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) {
        StepCheck c;
        c.n = s.n;
        const double dx = geometry::distance_to_box(s.x, inst.C());
        const double dy = geometry::distance_to_box(s.y, inst.Q());
        c.x_in_C = mode == Mode::Approximating ? dx : dx - s.eps;
        c.y_in_Q = mode == Mode::Approximating ? dy : dy - s.eps;
        c.link = eval.r_link(s.x, s.y) - s.eps;
        c.f_tilde = eval.r_f(s.p, s.x) - s.eps;
        c.g_tilde = eval.r_g(s.p, s.y) - s.eps;
        const double dp = geometry::distance(s.p, inst.p_star());
        c.p_in_M = dp - inst.m_radius();

        if (c.p_in_M > 1e-12) {
            c.violated.push_back("p_in_M");
            std::ostringstream msg;
            msg << "step " << s.n << ": p_n lies outside M (|p_n - p*| = " << dp << " > " << inst.m_radius()
                << ")";
            rep.diagnostics.push_back(msg.str());
        }
        if (c.x_in_C > tol)
            c.violated.push_back("x_in_C");
        if (c.y_in_Q > tol)
            c.violated.push_back("y_in_Q");
        if (c.link > tol)
            c.violated.push_back("link");
        if (c.f_tilde > tol)
            c.violated.push_back("f_tilde");
        if (c.g_tilde > tol)
            c.violated.push_back("g_tilde");

        if (s.eps > prev_eps)
            rep.eps_nonincreasing = false;
        if (dp > prev_dp)
            rep.param_nonincreasing = false;
        prev_eps = s.eps;
        prev_dp = dp;

        if (floor && !floor->empty())
            rep.tail_convergence.push_back(geometry::distance_to_cloud(concat(s.x, s.y), *floor));
        rep.steps.push_back(std::move(c));
    }

    rep.passed = rep.eps_nonincreasing && rep.param_nonincreasing &&
                 std::all_of(rep.steps.begin(), rep.steps.end(), [](const StepCheck& c) { return c.violated.empty(); });
    if (!rep.eps_nonincreasing)
        rep.diagnostics.push_back("eps_n is not nonincreasing");
    if (!rep.param_nonincreasing)
        rep.diagnostics.push_back("|p_n - p*| is not nonincreasing");
    return rep;
}

double lattice_slack(const PerturbedSEP& inst, const analysis::SamplingPlan& plan)
{
    return plan.h_candidate * std::sqrt(static_cast<double>(inst.dim1() + inst.dim2()));
}

std::vector<SequenceStep> generate(const PerturbedSEP& inst, const analysis::SamplingPlan& plan,
                                   const std::vector<double>& eps_schedule, std::span<const double> start,
                                   std::size_t threads)
{
    if (eps_schedule.empty())
        throw std::invalid_argument("eps schedule is empty");
    for (std::size_t i = 1; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]))
            throw std::invalid_argument("eps schedule must be strictly decreasing");
    const std::size_t d1 = inst.dim1();
    if (start.size() != d1 + inst.dim2())
        throw geometry::DimensionError("generate: start point must have dimension dim1 + dim2");

    const analysis::ApproxSetBuilder builder(inst, plan, eps_schedule.front(), threads);
    const double slack = lattice_slack(inst, plan);

    std::vector<SequenceStep> out;
    Point prev(start.begin(), start.end());
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        const double eps = eps_schedule[i];
        const auto set = builder.compute(eps);
        if (set.members.empty()) {
            std::ostringstream msg;
            msg << "sampled approximate solution set is empty at eps_n = " << eps;
            throw std::runtime_error(msg.str());
        }
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < set.members.size(); ++m) {
            const double d = geometry::distance(set.members[m], prev);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        const auto member = set.members[best];
        SequenceStep s;
        s.n = i + 1;
        s.p.assign(set.witness_params[best].begin(), set.witness_params[best].end());
        s.x.assign(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(d1));
        s.y.assign(member.begin() + static_cast<std::ptrdiff_t>(d1), member.end());
        s.eps = eps + slack;
        prev.assign(member.begin(), member.end());
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<double> convergence_profile(const std::vector<SequenceStep>& steps, const PointCloud& floor)
{
    if (floor.empty())
        throw std::invalid_argument("convergence_profile: floor set is empty");
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps)
        out.push_back(geometry::distance_to_cloud(concat(s.x, s.y), floor));
    return out;
}

} // namespace sepwp::sequences
