#include "sepwp/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace sepwp::expr;

namespace {

std::set<VarRef> vars(std::initializer_list<std::string> names)
{
    std::set<VarRef> out;
    for (const auto& n : names)
        out.insert(VarRef{static_cast<Namespace>(n[0]), std::stoi(n.substr(1))});
    return out;
}

double eval(const std::string& text, std::vector<double> p, std::vector<double> z, std::vector<double> x,
            std::vector<double> w = {}, std::vector<double> y = {})
{
    return parse(text).evaluate(Bindings{p, z, x, w, y});
}

// Random well-formed expression over p1, z1, x1 (no division, sqrt, or
// negative exponents, so evaluation cannot fail).
std::string random_expr(std::mt19937_64& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 2);
    switch (pick(rng)) {
    case 0: return std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)) + ".25";
    case 1: return "z1";
    case 2: return std::uniform_int_distribution<int>(0, 1)(rng) ? "x1" : "p1";
    case 3: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 6: return "-" + random_expr(rng, depth - 1);
    case 7: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(std::uniform_int_distribution<int>(0, 3)(rng));
    case 8: return "abs(" + random_expr(rng, depth - 1) + ")";
    default: return "max2(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
    }
}

} // namespace

TEST_CASE("parse: bifunctions of the worked examples")
{
    CHECK(parse("(z1 - x1) * (p1^2 + 2)").free_vars() == vars({"z1", "x1", "p1"}));
    CHECK(parse("w1 - y1").free_vars() == vars({"w1", "y1"}));
    CHECK(parse("3.5").free_vars().empty());
    CHECK(parse("w2 - y2 + p1").free_vars() == vars({"w2", "y2", "p1"}));
}

TEST_CASE("parse: error offsets and kinds")
{
    try {
        parse("z1 +");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse("(z1 + x1"), ParseError);
    CHECK_THROWS_AS(parse("z1 + x1)"), ParseError);
    CHECK_THROWS_AS(parse("foo(z1)"), ParseError);
    CHECK_THROWS_AS(parse("q1 + z1"), ParseError);
    CHECK_THROWS_AS(parse("z0"), ParseError);
    CHECK_THROWS_AS(parse("min2(z1)"), ParseError);
    CHECK_THROWS_AS(parse("abs(z1, x1)"), ParseError);
    CHECK_THROWS_AS(parse("z1^0.5"), ParseError);
    CHECK_THROWS_AS(parse("z1^x1"), ParseError);
    CHECK_THROWS_AS(parse("z1 x1"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
        parse("z1 + bogus");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 5);
        CHECK(e.token() == "bogus");
    }
}

TEST_CASE("evaluate: hand arithmetic")
{
    CHECK(eval("(z1 - x1)*(p1^2 + 2)", {1}, {0}, {-1}) == 3.0);
    CHECK(eval("(y1^2 - p1)^2 - (w1^2 - p1)^2", {1}, {}, {}, {1}, {0}) == 1.0);
    CHECK(eval("z1 * x1 * p1", {0}, {0}, {0}) == 0.0);
    CHECK(eval("-2^2", {}, {}, {}) == -4.0);
    CHECK(eval("2^3^2", {}, {}, {}) == 512.0);
    CHECK(eval("8 / 4 / 2", {}, {}, {}) == 1.0);
    CHECK(eval("10 - 4 - 3", {}, {}, {}) == 3.0);
    CHECK(eval("2^-1", {}, {}, {}) == 0.5);
    CHECK(eval("min2(z1, x1) + max2(z1, x1)", {}, {3}, {-7}) == -4.0);
    CHECK(eval("sqrt(abs(z1))", {}, {-16}, {}) == 4.0);
    CHECK(eval("1e-3 * 2E3", {}, {}, {}) == doctest::Approx(2.0));
}

TEST_CASE("evaluate: errors")
{
    CHECK_THROWS_AS(eval("1 / (z1 - z1)", {}, {2}, {}), EvalError);
    CHECK_THROWS_AS(eval("sqrt(z1)", {}, {-1}, {}), EvalError);
    CHECK_THROWS_AS(eval("z1^-1", {}, {0}, {}), EvalError);
    CHECK_THROWS_AS(eval("z2", {}, {1}, {}), EvalError);
}

TEST_CASE("round-trip and additivity on random expressions")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 300; ++i) {
        const std::string a = random_expr(rng, 4);
        const std::string b = random_expr(rng, 4);
        const Expression ea = parse(a);
        CAPTURE(a);
        CHECK(parse(ea.to_string()) == ea);
        CHECK(parse(ea.to_string()).to_string() == ea.to_string());

        const std::vector<double> p{u(rng)}, z{u(rng)}, x{u(rng)};
        const Bindings bind{p, z, x, {}, {}};
        const double va = ea.evaluate(bind);
        const double vb = parse(b).evaluate(bind);
        const double sum = parse("(" + a + ") + (" + b + ")").evaluate(bind);
        CHECK(std::abs(sum - (va + vb)) <= 1e-12 * std::max({1.0, std::abs(va), std::abs(vb)}));
    }
}

TEST_CASE("free_vars matches the variables present in the text")
{
    CHECK(parse("p2 * z3 - x1 + y4 / w5").free_vars() == vars({"p2", "z3", "x1", "y4", "w5"}));
    CHECK(parse("z1 * z1 + z1").free_vars() == vars({"z1"}));
    CHECK(parse("z12").free_vars() == vars({"z12"}));
}

TEST_CASE("structural equality ignores whitespace and redundant parentheses")
{
    CHECK(parse("z1+x1*2") == parse(" ( z1 + (x1 * 2) ) "));
    CHECK_FALSE(parse("z1 + x1") == parse("x1 + z1"));
}
