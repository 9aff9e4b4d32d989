#include "sepwp/analysis.hpp"

#include "sepwp/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sepwp::analysis {

using geometry::Box;
using problem::ResidualEvaluator;

void SamplingPlan::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(h_candidate, "h_candidate");
    positive(h_inner, "h_inner");
    positive(h_param, "h_param");
    positive(eps_floor, "eps_floor");
}

// ============================================================================
// Lattices
// ============================================================================

namespace {

struct ParamLattice {
    PointCloud points{0};
    std::vector<double> offset_norm; // sorted ascending
};

ParamLattice make_param_lattice(const PerturbedSEP& inst, double h, double radius)
{
    const std::size_t d = inst.pdim();
    const auto K = static_cast<long>(std::floor(radius / h + 1e-9));
    const std::size_t side = static_cast<std::size_t>(2 * K + 1);

    struct Entry {
        double norm;
        std::vector<long> k;
    };
    std::vector<Entry> entries;
    std::vector<long> k(d, -K);
    std::vector<double> off(d);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i)
        total *= side;
    for (std::size_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < d; ++i)
            off[i] = static_cast<double>(k[i]) * h;
        const double nrm = geometry::norm(off);
        if (nrm <= radius)
            entries.push_back({nrm, k});
        for (std::size_t i = d; i-- > 0;) {
            if (++k[i] <= K)
                break;
            k[i] = -K;
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.norm != b.norm)
            return a.norm < b.norm;
        return a.k < b.k;
    });

    ParamLattice out;
    out.points = PointCloud(d);
    out.points.reserve(entries.size());
    Point p(d);
    for (const auto& e : entries) {
        for (std::size_t i = 0; i < d; ++i)
            p[i] = inst.p_star()[i] + static_cast<double>(e.k[i]) * h;
        out.points.push_back(p);
        out.offset_norm.push_back(e.norm);
    }
    return out;
}

// Nodes lower + k * h covering [lower - eps, upper + eps], one spare node per side.
std::vector<std::vector<double>> candidate_axes(const Box& box, double h, double eps)
{
    std::vector<std::vector<double>> axes(box.dim());
    for (std::size_t i = 0; i < box.dim(); ++i) {
        const double lo = box.lower()[i];
        const double width = box.upper()[i] - lo;
        const auto kmin = -static_cast<long>(std::floor(eps / h)) - 1;
        const auto kmax = static_cast<long>(std::floor((width + eps) / h)) + 1;
        for (long k = kmin; k <= kmax; ++k)
            axes[i].push_back(lo + static_cast<double>(k) * h);
    }
    return axes;
}

double effective_radius(const PerturbedSEP& inst, double eps)
{
    return std::min(eps, inst.m_radius());
}

} // namespace

PointCloud parameter_grid(const PerturbedSEP& inst, double h_param, double radius)
{
    if (!(h_param > 0.0))
        throw std::invalid_argument("h_param must be positive");
    if (!(radius >= 0.0))
        throw std::invalid_argument("parameter radius must be nonnegative");
    return make_param_lattice(inst, h_param, radius).points;
}

Membership membership(const PerturbedSEP& inst, const SamplingPlan& plan, double eps, std::span<const double> z,
                      std::span<const double> w)
{
    plan.validate();
    if (!(eps > 0.0))
        throw std::invalid_argument("eps must be positive");
    if (z.size() != inst.dim1() || w.size() != inst.dim2())
        throw geometry::DimensionError("membership: candidate dimensions do not match the instance");

    Membership out;
    if (geometry::distance_to_box(z, inst.C()) > eps || geometry::distance_to_box(w, inst.Q()) > eps)
        return out;
    const ResidualEvaluator eval(inst, plan.h_inner);
    if (eval.r_link(z, w) > eps)
        return out;
    const PointCloud params = parameter_grid(inst, plan.h_param, effective_radius(inst, eps));
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (eval.r_f(params[i], z) <= eps && eval.r_g(params[i], w) <= eps) {
            out.member = true;
            out.witness.assign(params[i].begin(), params[i].end());
            return out;
        }
    }
    return out;
}

// ============================================================================
// ApproxSetBuilder
// ============================================================================

struct ApproxSetBuilder::Tables {
    const PerturbedSEP* inst = nullptr;
    SamplingPlan plan;
    double eps_max = 0.0;
    std::size_t threads = 1;

    ParamLattice params;
    PointCloud zs{0};
    std::vector<std::vector<double>> w_axes;
    PointCloud ws{0};
    std::vector<std::size_t> w_stride;
    std::vector<double> r_c;  // per z
    std::vector<double> r_q;  // per w
    PointCloud az{0};         // A z per z
    std::vector<double> r_f;  // [ip * nz + iz]
    std::vector<double> r_g;  // [ip * nw + iw]
};

ApproxSetBuilder::ApproxSetBuilder(const PerturbedSEP& inst, const SamplingPlan& plan, double eps_max,
                                   std::size_t threads)
    : t_(std::make_unique<Tables>())
{
    plan.validate();
    if (!(eps_max > 0.0) || !std::isfinite(eps_max))
        throw std::invalid_argument("eps must be positive");
    Tables& t = *t_;
    t.inst = &inst;
    t.plan = plan;
    t.eps_max = eps_max;
    t.threads = resolve_threads(threads);

    t.params = make_param_lattice(inst, plan.h_param, effective_radius(inst, eps_max));
    t.zs = geometry::cartesian(candidate_axes(inst.C(), plan.h_candidate, eps_max));
    t.w_axes = candidate_axes(inst.Q(), plan.h_candidate, eps_max);
    t.ws = geometry::cartesian(t.w_axes);
    t.w_stride.assign(t.w_axes.size(), 1);
    for (std::size_t i = t.w_axes.size(); i-- > 1;)
        t.w_stride[i - 1] = t.w_stride[i] * t.w_axes[i].size();

    const std::size_t nz = t.zs.size();
    const std::size_t nw = t.ws.size();
    const std::size_t np = t.params.points.size();

    t.r_c.resize(nz);
    t.az = PointCloud(inst.dim2());
    t.az.reserve(nz);
    for (std::size_t iz = 0; iz < nz; ++iz) {
        t.r_c[iz] = geometry::distance_to_box(t.zs[iz], inst.C());
        t.az.push_back(geometry::apply_operator(inst.A(), t.zs[iz]));
    }
    t.r_q.resize(nw);
    for (std::size_t iw = 0; iw < nw; ++iw)
        t.r_q[iw] = geometry::distance_to_box(t.ws[iw], inst.Q());

    const ResidualEvaluator eval(inst, plan.h_inner);
    constexpr double inf = std::numeric_limits<double>::infinity();
    t.r_f.assign(np * nz, inf);
    t.r_g.assign(np * nw, inf);
    parallel_for(nz, t.threads, [&](std::size_t iz) {
        if (t.r_c[iz] > eps_max)
            return;
        for (std::size_t ip = 0; ip < np; ++ip)
            t.r_f[ip * nz + iz] = eval.r_f(t.params.points[ip], t.zs[iz]);
    });
    parallel_for(nw, t.threads, [&](std::size_t iw) {
        if (t.r_q[iw] > eps_max)
            return;
        for (std::size_t ip = 0; ip < np; ++ip)
            t.r_g[ip * nw + iw] = eval.r_g(t.params.points[ip], t.ws[iw]);
    });
}

ApproxSetBuilder::~ApproxSetBuilder() = default;
ApproxSetBuilder::ApproxSetBuilder(ApproxSetBuilder&&) noexcept = default;
ApproxSetBuilder& ApproxSetBuilder::operator=(ApproxSetBuilder&&) noexcept = default;

double ApproxSetBuilder::eps_max() const noexcept
{
    return t_->eps_max;
}

ApproxSolutionSet ApproxSetBuilder::compute(double eps) const
{
    const Tables& t = *t_;
    if (!(eps > 0.0))
        throw std::invalid_argument("eps must be positive");
    if (eps > t.eps_max)
        throw std::invalid_argument("eps exceeds the range this builder was prepared for");

    const PerturbedSEP& inst = *t.inst;
    const std::size_t nz = t.zs.size();
    const std::size_t nw = t.ws.size();
    const double radius = effective_radius(inst, eps);
    const auto& norms = t.params.offset_norm;
    const std::size_t np = static_cast<std::size_t>(std::upper_bound(norms.begin(), norms.end(), radius) - norms.begin());
    const std::size_t d2 = inst.dim2();

    struct Hit {
        std::size_t iw;
        std::size_t ip;
    };
    std::vector<std::vector<Hit>> hits(nz);

    parallel_for(nz, t.threads, [&](std::size_t iz) {
        if (t.r_c[iz] > eps)
            return;
        const auto target = t.az[iz];
        std::vector<std::size_t> lo(d2), hi(d2);
        for (std::size_t i = 0; i < d2; ++i) {
            const auto& ax = t.w_axes[i];
            auto a = std::lower_bound(ax.begin(), ax.end(), target[i] - eps);
            auto b = std::upper_bound(ax.begin(), ax.end(), target[i] + eps);
            lo[i] = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (a - ax.begin()) - 1));
            hi[i] = std::min(ax.size(), static_cast<std::size_t>(b - ax.begin()) + 1);
            if (lo[i] >= hi[i])
                return;
        }
        std::vector<std::size_t> idx = lo;
        for (;;) {
            std::size_t iw = 0;
            for (std::size_t i = 0; i < d2; ++i)
                iw += idx[i] * t.w_stride[i];
            if (t.r_q[iw] <= eps && geometry::distance(t.ws[iw], target) <= eps) {
                for (std::size_t ip = 0; ip < np; ++ip) {
                    if (t.r_f[ip * nz + iz] <= eps && t.r_g[ip * nw + iw] <= eps) {
                        hits[iz].push_back({iw, ip});
                        break;
                    }
                }
            }
            std::size_t i = d2;
            while (i-- > 0) {
                if (++idx[i] < hi[i])
                    break;
                idx[i] = lo[i];
            }
            if (i == static_cast<std::size_t>(-1))
                break;
        }
    });

    ApproxSolutionSet out;
    out.eps = eps;
    out.plan = t.plan;
    out.members = PointCloud(inst.dim1() + d2);
    out.witness_params = PointCloud(inst.pdim());
    Point pair(inst.dim1() + d2);
    for (std::size_t iz = 0; iz < nz; ++iz) {
        for (const Hit& h : hits[iz]) {
            std::copy(t.zs[iz].begin(), t.zs[iz].end(), pair.begin());
            std::copy(t.ws[h.iw].begin(), t.ws[h.iw].end(), pair.begin() + static_cast<std::ptrdiff_t>(inst.dim1()));
            out.members.push_back(pair);
            out.witness_params.push_back(t.params.points[h.ip]);
        }
    }
    return out;
}

ApproxSolutionSet compute_S_eps(const PerturbedSEP& inst, const SamplingPlan& plan, double eps, std::size_t threads)
{
    return ApproxSetBuilder(inst, plan, eps, threads).compute(eps);
}

PointCloud solution_floor(const PerturbedSEP& inst, const SamplingPlan& plan, std::size_t threads)
{
    return compute_S_eps(inst, plan, plan.eps_floor, threads).members;
}

// ============================================================================
// Sweep and classification
// ============================================================================

const char* to_string(Classification c)
{
    switch (c) {
    case Classification::LPWellPosed: return "LPWellPosed";
    case Classification::GeneralizedLPWellPosed: return "GeneralizedLPWellPosed";
    case Classification::NoSolutionDetected: return "NoSolutionDetected";
    case Classification::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Thresholds Thresholds::defaults(const SamplingPlan& plan)
{
    return {5.0 * plan.h_candidate, 5.0 * plan.h_candidate};
}

std::vector<double> geometric_schedule(double start, double factor, std::size_t steps)
{
    if (!(start > 0.0))
        throw std::invalid_argument("eps start must be positive");
    if (!(factor > 0.0 && factor < 1.0))
        throw std::invalid_argument("factor must lie in (0, 1)");
    std::vector<double> out;
    double e = start;
    for (std::size_t i = 0; i < steps; ++i) {
        out.push_back(e);
        e *= factor;
    }
    return out;
}

namespace {

void fill_metrics(SweepRecord& rec, const ApproxSolutionSet& set, const ApproxSolutionSet& floor, std::size_t k)
{
    rec.count = set.members.size();
    if (set.members.empty())
        return;
    rec.diam = geometry::diameter(set.members);
    rec.mu_hat = geometry::kuratowski_estimate(set.members, k);
    if (!floor.members.empty())
        rec.hausdorff_to_floor = geometry::hausdorff(set.members, floor.members);
}

bool nonincreasing(const std::vector<SweepRecord>& recs, std::optional<double> SweepRecord::*field)
{
    std::optional<double> prev;
    for (const auto& r : recs) {
        const auto& v = r.*field;
        if (!v)
            continue;
        if (prev && *v > *prev)
            return false;
        prev = v;
    }
    return true;
}

} // namespace

SweepResult sweep(const PerturbedSEP& inst, const SamplingPlan& plan, const std::vector<double>& eps_schedule,
                  const SweepOptions& opt)
{
    plan.validate();
    if (eps_schedule.empty())
        throw std::invalid_argument("eps schedule is empty");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0))
            throw std::invalid_argument("eps schedule entries must be positive");
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
            throw std::invalid_argument("eps schedule must be strictly decreasing");
    }
    if (eps_schedule.back() < plan.eps_floor)
        throw std::invalid_argument("eps schedule goes below eps_floor");
    if (opt.kuratowski_k == 0)
        throw std::invalid_argument("kuratowski_k must be positive");

    using clock = std::chrono::steady_clock;
    auto elapsed_ms = [](clock::time_point since) {
        return std::chrono::duration<double, std::milli>(clock::now() - since).count();
    };

    SweepResult res;
    res.eps_list = eps_schedule;
    res.kuratowski_k = opt.kuratowski_k;
    res.thresholds = opt.thresholds.value_or(Thresholds::defaults(plan));

    const auto t0 = clock::now();
    const ApproxSetBuilder builder(inst, plan, eps_schedule.front(), opt.threads);
    const double setup_ms = elapsed_ms(t0);

    auto t_floor = clock::now();
    res.floor_set = builder.compute(plan.eps_floor);
    const double floor_ms = elapsed_ms(t_floor);

    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        const auto t1 = clock::now();
        SweepRecord rec;
        rec.eps = eps_schedule[i];
        const ApproxSolutionSet set = builder.compute(rec.eps);
        fill_metrics(rec, set, res.floor_set, opt.kuratowski_k);
        rec.wallclock_ms = elapsed_ms(t1) + (i == 0 ? setup_ms : 0.0);
        res.records.push_back(rec);
    }
    if (plan.eps_floor < eps_schedule.back()) {
        const auto t1 = clock::now();
        SweepRecord rec;
        rec.eps = plan.eps_floor;
        rec.is_floor = true;
        fill_metrics(rec, res.floor_set, res.floor_set, opt.kuratowski_k);
        rec.wallclock_ms = elapsed_ms(t1) + floor_ms;
        res.records.push_back(rec);
    }

    try {
        res.classification = classify(res, res.thresholds.tau_point, res.thresholds.tau_cluster);
    } catch (const std::invalid_argument&) {
        res.classification = Classification::Inconclusive;
    }
    return res;
}

Classification classify(const SweepResult& s, double tau_point, double tau_cluster)
{
    if (s.floor_set.members.empty())
        return Classification::NoSolutionDetected;

    const auto nonempty = std::count_if(s.records.begin(), s.records.end(),
                                        [](const SweepRecord& r) { return r.count > 0; });
    if (nonempty < 3)
        throw std::invalid_argument("classification needs at least three nonempty sweep records");

    const SweepRecord* last = nullptr;
    for (const auto& r : s.records)
        if (r.count > 0 && (!last || r.eps < last->eps))
            last = &r;

    if (nonincreasing(s.records, &SweepRecord::diam) && *last->diam <= tau_point)
        return Classification::LPWellPosed;

    if (last->hausdorff_to_floor && last->mu_hat && nonincreasing(s.records, &SweepRecord::hausdorff_to_floor) &&
        nonincreasing(s.records, &SweepRecord::mu_hat) && *last->hausdorff_to_floor <= tau_cluster &&
        *last->mu_hat <= tau_cluster)
        return Classification::GeneralizedLPWellPosed;

    return Classification::Inconclusive;
}

} // namespace sepwp::analysis
