#include "oracles.hpp"

#include "sepwp/analysis.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sepwp;
using namespace sepwp::analysis;
using V = std::vector<double>;

namespace {

std::set<std::vector<double>> as_set(const PointCloud& c)
{
    std::set<std::vector<double>> out;
    for (std::size_t i = 0; i < c.size(); ++i)
        out.emplace(c[i].begin(), c[i].end());
    return out;
}

bool subset(const PointCloud& a, const PointCloud& b)
{
    const auto sb = as_set(b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!sb.count(std::vector<double>(a[i].begin(), a[i].end())))
            return false;
    return true;
}

SamplingPlan uniform_plan(double h, double floor)
{
    return SamplingPlan{h, h, h, floor};
}

} // namespace

TEST_CASE("parameter grid order and prefixes")
{
    const auto cfg = oracle::example("ex2");
    const auto g = parameter_grid(cfg.instance, 0.01, 0.05);
    REQUIRE(g.size() == 11);
    CHECK(g[0][0] == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(std::abs(g[i][0] - 1.0) >= std::abs(g[i - 1][0] - 1.0));
    const auto small = parameter_grid(cfg.instance, 0.01, 0.02);
    REQUIRE(small.size() == 5);
    for (std::size_t i = 0; i < small.size(); ++i)
        CHECK(V(small[i].begin(), small[i].end()) == V(g[i].begin(), g[i].end()));
}

TEST_CASE("membership examples")
{
    const auto ex1 = oracle::example("ex1");
    const auto plan = uniform_plan(0.01, 0.02);
    const auto m = membership(ex1.instance, plan, 0.1, V{0}, V{0});
    CHECK(m.member);
    CHECK(m.witness == V{0});
    CHECK_FALSE(membership(ex1.instance, plan, 0.1, V{-0.2}, V{0}).member);

    const auto ex2 = oracle::example("ex2");
    CHECK(membership(ex2.instance, plan, 0.04, V{1.0}, V{1.0}).member);
    CHECK_FALSE(membership(ex2.instance, plan, 0.04, V{0.0}, V{0.0}).member);
}

TEST_CASE("ex1 sampled set agrees with the closed-form oracle")
{
    const auto cfg = oracle::example("ex1");
    const auto& plan = cfg.plan;
    const ApproxSetBuilder builder(cfg.instance, plan, 0.2, 2);
    for (double eps : {0.2, 0.1, 0.05, 0.02}) {
        CAPTURE(eps);
        const auto set = builder.compute(eps);
        const auto members = as_set(set.members);
        for (const auto& m : members)
            CHECK(oracle::ex1_member(m[0], m[1], eps) >= 0);
        // every strictly interior lattice point must be present
        std::size_t interior = 0;
        for (long i = -60; i <= 260; ++i)
            for (long j = -60; j <= 260; ++j) {
                const double z = -1.0 + static_cast<double>(i) * plan.h_candidate;
                const double w = -1.0 + static_cast<double>(j) * plan.h_candidate;
                if (oracle::ex1_member(z, w, eps) == 1) {
                    ++interior;
                    CHECK(members.count(V{z, w}) == 1);
                }
            }
        CHECK(interior > 0);
        // box from the worked example plus one lattice step
        for (const auto& m : members) {
            CHECK(m[0] >= -eps / 2 - plan.h_candidate);
            CHECK(m[0] <= eps + plan.h_candidate);
            CHECK(std::abs(m[1]) <= eps + plan.h_candidate);
        }
        CHECK(members.count(V{0.0, 0.0}) == 1);
        CHECK(geometry::diameter(set.members) <= 2.5 * eps + 4 * plan.h_candidate);
    }
}

TEST_CASE("ex1 with h = 0.01 stays inside the stated box")
{
    const auto cfg = oracle::example("ex1");
    const auto set = compute_S_eps(cfg.instance, uniform_plan(0.01, 0.02), 0.1, 1);
    for (std::size_t i = 0; i < set.members.size(); ++i) {
        CHECK(set.members[i][0] >= -0.06);
        CHECK(set.members[i][0] <= 0.11);
        CHECK(std::abs(set.members[i][1]) <= 0.11);
    }
}

TEST_CASE("ex2 sampled set lies on the two strips")
{
    const auto cfg = oracle::example("ex2");
    const auto set = compute_S_eps(cfg.instance, cfg.plan, 0.04, 1);
    REQUIRE_FALSE(set.members.empty());
    // inner grid slack: min over the h_inner grid of (x^2 - p)^2 is at most (2 * 2 * h)^2 for p in [0, 4]
    const double slack = std::pow(4 * cfg.plan.h_inner, 2);
    const auto strip = oracle::ex2_strip(0.04 + slack);
    bool near_plus = false, near_minus = false;
    for (std::size_t i = 0; i < set.members.size(); ++i) {
        const double z = set.members[i][0], w = set.members[i][1];
        CHECK(std::abs(z) >= strip.inner - 1e-12);
        CHECK(std::abs(z) <= strip.outer + 1e-12);
        CHECK(std::abs(w - z) <= 0.04 + 1e-12);
        CHECK(std::hypot(z, w) > 0.5);
        near_plus |= z > 0;
        near_minus |= z < 0;
    }
    CHECK(near_plus);
    CHECK(near_minus);
    CHECK(as_set(set.members).count(V{1.0, 1.0}) == 1);
    CHECK(as_set(set.members).count(V{-1.0, -1.0}) == 1);
}

TEST_CASE("builder, standalone computation and membership agree")
{
    for (const char* name : {"ex1", "ex2"}) {
        const auto cfg = oracle::example(name);
        const ApproxSetBuilder builder(cfg.instance, cfg.plan, 0.1, 3);
        for (double eps : {0.1, 0.05}) {
            const auto a = builder.compute(eps);
            const auto b = compute_S_eps(cfg.instance, cfg.plan, eps, 1);
            CHECK(a.members == b.members);
            CHECK(a.witness_params == b.witness_params);
            for (std::size_t i = 0; i < a.members.size(); i += 7) {
                const auto m = a.members[i];
                const auto mem = membership(cfg.instance, cfg.plan, eps, m.subspan(0, 1), m.subspan(1, 1));
                REQUIRE(mem.member);
                CHECK(mem.witness == V(a.witness_params[i].begin(), a.witness_params[i].end()));
            }
        }
        CHECK_THROWS(builder.compute(0.2));
        CHECK_THROWS(builder.compute(0.0));
    }
}

TEST_CASE("witnesses re-verify")
{
    for (const char* name : {"ex1", "ex2"}) {
        const auto cfg = oracle::example(name);
        const double eps = 0.05;
        const auto set = compute_S_eps(cfg.instance, cfg.plan, eps, 2);
        for (std::size_t i = 0; i < set.members.size(); ++i) {
            const auto m = set.members[i];
            const auto p = set.witness_params[i];
            CHECK(geometry::distance(p, cfg.instance.p_star()) <= eps + 1e-12);
            const auto r = problem::residual(cfg.instance, p, m.subspan(0, 1), m.subspan(1, 1), cfg.plan.h_inner);
            CHECK(r.max() <= eps + 1e-12);
        }
    }
}

TEST_CASE("nestedness along descending schedules is exact")
{
    for (const char* name : {"ex1", "ex2"}) {
        const auto cfg = oracle::example(name);
        const std::vector<double> schedule{0.2, 0.13, 0.1, 0.07, 0.05, 0.03, 0.02};
        const ApproxSetBuilder builder(cfg.instance, cfg.plan, schedule.front(), 2);
        PointCloud prev = builder.compute(schedule.front()).members;
        for (std::size_t i = 1; i < schedule.size(); ++i) {
            const auto cur = builder.compute(schedule[i]).members;
            CHECK(subset(cur, prev));
            // computed on its own, without the shared tables
            CHECK(subset(compute_S_eps(cfg.instance, cfg.plan, schedule[i], 1).members, prev));
            prev = cur;
        }
    }
}

TEST_CASE("results do not depend on the thread count")
{
    const auto cfg = oracle::example("ex2");
    const auto a = compute_S_eps(cfg.instance, cfg.plan, 0.1, 1);
    const auto b = compute_S_eps(cfg.instance, cfg.plan, 0.1, 8);
    CHECK(a.members == b.members);
    CHECK(a.witness_params == b.witness_params);
}

TEST_CASE("solution floor")
{
    const auto ex1 = oracle::example("ex1");
    auto plan1 = ex1.plan;
    plan1.eps_floor = 0.02;
    const auto f1 = solution_floor(ex1.instance, plan1, 1);
    REQUIRE_FALSE(f1.empty());
    for (std::size_t i = 0; i < f1.size(); ++i)
        CHECK(geometry::norm(f1[i]) <= 0.03);
    CHECK(as_set(f1).count(V{0.0, 0.0}) == 1);

    const auto ex2 = oracle::example("ex2");
    const auto f2 = solution_floor(ex2.instance, ex2.plan, 1);
    const double e = ex2.plan.eps_floor;
    const double bound = std::sqrt(2.0) * (1.0 - std::sqrt(1.0 - e - std::sqrt(e))) + std::sqrt(2.0) * ex2.plan.h_candidate;
    for (std::size_t i = 0; i < f2.size(); ++i)
        CHECK(oracle::ex2_solution_distance(f2[i][0], f2[i][1]) <= bound);
    CHECK(as_set(f2).count(V{1.0, 1.0}) == 1);
    CHECK(as_set(f2).count(V{-1.0, -1.0}) == 1);
}

TEST_CASE("sweep on ex1")
{
    const auto cfg = oracle::example("ex1");
    const auto res = sweep(cfg.instance, cfg.plan, {0.2, 0.1, 0.05, 0.02}, {2, std::nullopt, 2});
    REQUIRE(res.records.size() == 5);
    CHECK(res.records.back().is_floor);
    CHECK(res.records.back().eps == cfg.plan.eps_floor);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(res.records[i].diam);
        CHECK(*res.records[i].diam <= 2.5 * res.records[i].eps + 4 * cfg.plan.h_candidate);
        if (i > 0)
            CHECK(*res.records[i].diam < *res.records[i - 1].diam);
    }
    CHECK(res.classification == Classification::LPWellPosed);
}

TEST_CASE("sweep on ex2")
{
    const auto cfg = oracle::example("ex2");
    SweepOptions opt;
    opt.thresholds = cfg.effective_thresholds();
    const auto res = sweep(cfg.instance, cfg.plan, {0.2, 0.1, 0.05}, opt);
    REQUIRE(res.records.size() == 4);
    for (std::size_t i = 1; i < res.records.size(); ++i) {
        CHECK(*res.records[i].mu_hat < *res.records[i - 1].mu_hat);
        CHECK(*res.records[i].hausdorff_to_floor <= *res.records[i - 1].hausdorff_to_floor);
    }
    // the two clusters stay apart: diameter does not vanish
    for (const auto& r : res.records)
        CHECK(*r.diam > 2.0 * std::sqrt(2.0) - 0.15);
    CHECK(res.classification == Classification::GeneralizedLPWellPosed);

    // default thresholds of 5h are below the cluster width reachable at h = 0.01
    const auto strict = sweep(cfg.instance, cfg.plan, {0.2, 0.1, 0.05}, {});
    CHECK(strict.classification == Classification::Inconclusive);
}

TEST_CASE("sweep on an instance without solutions")
{
    const problem::PerturbedSEP inst(1, 1, 1, geometry::Box({0.0}, {1.0}), geometry::Box({0.0}, {1.0}),
                                     geometry::LinearOperator::identity(1), expr::parse("-1"), expr::parse("0"),
                                     {0.0}, 1.0);
    const auto res = sweep(inst, uniform_plan(0.05, 0.05), {0.4, 0.2, 0.1}, {});
    for (const auto& r : res.records) {
        CHECK(r.count == 0);
        CHECK_FALSE(r.diam);
        CHECK_FALSE(r.mu_hat);
        CHECK_FALSE(r.hausdorff_to_floor);
    }
    CHECK(res.classification == Classification::NoSolutionDetected);
}

TEST_CASE("sweep argument validation")
{
    const auto cfg = oracle::example("ex1");
    CHECK_THROWS(sweep(cfg.instance, cfg.plan, {}, {}));
    CHECK_THROWS(sweep(cfg.instance, cfg.plan, {0.1, 0.2}, {}));
    CHECK_THROWS(sweep(cfg.instance, cfg.plan, {0.1, 0.001}, {}));
    const auto two = sweep(cfg.instance, cfg.plan, {0.01}, {});
    CHECK(two.classification == Classification::Inconclusive);
    CHECK_THROWS(classify(two, 1.0, 1.0));
    CHECK(geometric_schedule(0.2, 0.5, 3) == V{0.2, 0.1, 0.05});
    CHECK_THROWS(SamplingPlan{0.0, 0.1, 0.1, 0.1}.validate());
}
