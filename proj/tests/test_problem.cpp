#include "pvring/problem.hpp"
#include "pvring/prolong.hpp"

#include <doctest.h>

#include <random>

using namespace pvring;

namespace {

const char* MINIMAL = R"(# minimal valid file
[field]
vars: x, t
partial: t

[sigma s]
x -> x + 1
t -> t
inverse x -> x - 1
inverse t -> t

[system]
n: 1
A s: [[t]]
)";

} // namespace

TEST_CASE("minimal valid file parses and checks") {
    ProblemFile pf = parse_problem(MINIMAL);
    CHECK(pf.field->sigmas().size() == 1);
    CHECK(pf.field->deltas().empty());
    REQUIRE(pf.system);
    CHECK(pf.system->n() == 1);
    CHECK(check_commutation(*pf.field).ok());
    CHECK(check_integrability(*pf.system).ok());
}

TEST_CASE("non-invertible A is a semantic error") {
    std::string bad = MINIMAL;
    bad.replace(bad.find("A s: [[t]]"), 10, "A s: [[0]]");
    try {
        parse_problem(bad);
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("invertible") != std::string::npos);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_problem("[field]\nvars: x, t\npartial: t\n\n[delta d]\nx -> 1 +\nt -> 0\n\n[system]\nn: 1\nB d: [[0]]\n");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.line == 6);
    }
}

TEST_CASE("unknown sections and keys are errors") {
    CHECK_THROWS_AS(parse_problem("[bogus]\n"), parse_error);
    CHECK_THROWS_AS(parse_problem("[field]\nvars: x\npartial: x\ncolor: red\n"), parse_error);
    CHECK_THROWS_AS(
        parse_problem("[field]\nvars: x, t\npartial: t\n[delta d]\nx -> 1\nt -> 0\n[options]\nbogus_key: 3\n"),
        parse_error);
}

TEST_CASE("missing inverse images are an error") {
    const char* text = R"([field]
vars: x, t
partial: t
[sigma s]
x -> x + 1
t -> t
)";
    CHECK_THROWS_AS(parse_problem(text), parse_error);
}

TEST_CASE("duplicate operator ids are an error") {
    const char* text = R"([field]
vars: x, t
partial: t
[delta d]
x -> 1
t -> 0
[delta d]
x -> 0
t -> 1
)";
    CHECK_THROWS_AS(parse_problem(text), parse_error);
}

TEST_CASE("expression grammar: precedence, powers, rationals") {
    auto ring = FieldDesc::make_base_ring({"x", "t"});
    auto x = RationalFunction::var(ring, 0);
    auto t = RationalFunction::var(ring, 1);

    CHECK(eval_field_expr(parse_expression("1/2*x + t^2"), ring) ==
          x.mul_ui(1) * RationalFunction::from_rat(ring, Rat(1, 2)) + t * t);
    CHECK(eval_field_expr(parse_expression("-x^2"), ring) == -(x * x));
    CHECK(eval_field_expr(parse_expression("(x + t)*(x - t)"), ring) == x * x - t * t);
    CHECK(eval_field_expr(parse_expression("3/7"), ring) == RationalFunction::from_rat(ring, Rat(3, 7)));
    CHECK(eval_field_expr(parse_expression("2 - 1 - 1"), ring).is_zero());
    CHECK_THROWS_AS(eval_field_expr(parse_expression("1/(x - x)"), ring), parse_error);
    CHECK_THROWS_AS(parse_expression("x + "), parse_error);
    CHECK_THROWS_AS(eval_field_expr(parse_expression("X[1,1]"), ring), parse_error);
}

TEST_CASE("jet expression round-trip on canonical forms") {
    ProblemFile pf = parse_problem(MINIMAL);
    auto ctx = JetContext::create(pf.field, pf.system, 1, 3);
    for (const char* text : {"X'[1,1] - t*X[1,1]", "X^(2)[1,1] + 1/2*X[1,1]", "(x + 1)*X[1,1] - 3", "det - 1"}) {
        FilteredElement f = eval_jet_expr(parse_expression(text), ctx, 2);
        std::string printed = f.str();
        FilteredElement g = eval_jet_expr(parse_expression(printed), ctx, 2);
        CHECK(printed == g.str());
        CHECK(f == g);
    }
    // Division by det produces det powers; anything else is rejected.
    FilteredElement h = eval_jet_expr(parse_expression("X'[1,1]/det^2"), ctx, 2);
    CHECK(h.det_power() == 2);
    std::string printed = h.str();
    CHECK(eval_jet_expr(parse_expression(printed), ctx, 2) == h);
    CHECK_THROWS_AS(eval_jet_expr(parse_expression("1/X'[1,1]"), ctx, 2), parse_error);
}

TEST_CASE("plain ideals materialize over their own ring") {
    const char* text = R"([field]
vars: x, t
partial: t
[delta d]
x -> 1
t -> 0
[ideal I]
vars: a, b
a^2 + b^2
a*b
)";
    ProblemFile pf = parse_problem(text);
    PlainIdeal I = build_plain_ideal(pf.ideals.at("I"));
    CHECK(I.gens.size() == 2);
    CHECK(I.gens[0].str() == "a^2 + b^2");
    auto G = buchberger(IdealPresentation<Rat>(I.ring, I.gens));
    CHECK(G.basis.size() == 3);
}

TEST_CASE("seeds materialize at their levels") {
    const char* text = R"([field]
vars: x, t
partial: t
[delta d]
x -> 1
t -> 0
[system]
n: 1
B d: [[0]]
[seed 0]
X[1,1] - 1
[seed 1]
X'[1,1]
)";
    ProblemFile pf = parse_problem(text);
    CHECK(pf.max_seed_order() == 1);
    auto ctx = JetContext::create(pf.field, pf.system, 1, 2);
    auto s0 = build_jet_polys(pf.seeds.at(0), ctx, 0);
    auto s1 = build_jet_polys(pf.seeds.at(1), ctx, 1);
    CHECK(s0[0].str() == "X[1,1] - 1");
    CHECK(s1[0].str() == "X'[1,1]");
}

TEST_CASE("reserved variable names are rejected") {
    CHECK_THROWS_AS(parse_problem("[field]\nvars: X, t\npartial: t\n"), parse_error);
    CHECK_THROWS_AS(parse_problem("[field]\nvars: det, t\npartial: t\n"), parse_error);
}

TEST_CASE("options parse and override defaults") {
    std::string text = MINIMAL;
    text += "\n[options]\nspair_budget: 5000\ndegree_cap: 12\nmax_level: 4\nconstants_degree_bound: 2\n";
    ProblemFile pf = parse_problem(text);
    CHECK(pf.options.spair_budget == 5000);
    CHECK(pf.options.degree_cap == 12);
    CHECK(pf.options.max_level == 4);
    CHECK(pf.options.constants_degree_bound == 2);
}

TEST_CASE("field element print-parse round-trip is exact") {
    auto ring = FieldDesc::make_base_ring({"x", "t"});
    auto rng = std::mt19937_64(0xF00D);
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> e(0, 2);
    for (int iter = 0; iter < 60; ++iter) {
        QPoly num = QPoly::zero(ring);
        QPoly den = QPoly::zero(ring);
        for (int k = 0; k < 3; ++k) {
            std::vector<Monomial::Entry> em{{0, (std::uint32_t)e(rng)}, {1, (std::uint32_t)e(rng)}};
            num = num + QPoly::term(ring, Monomial(em), Rat(coeff(rng)));
            std::vector<Monomial::Entry> ed{{0, (std::uint32_t)e(rng)}, {1, (std::uint32_t)e(rng)}};
            den = den + QPoly::term(ring, Monomial(ed), Rat(coeff(rng)));
        }
        if (den.is_zero()) continue;
        RationalFunction f(num, den);
        std::string printed = f.str();
        RationalFunction g = eval_field_expr(parse_expression(printed), ring);
        CHECK(g == f);
        CHECK(g.str() == printed);
    }
}
