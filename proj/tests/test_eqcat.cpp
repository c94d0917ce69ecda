#include "doctest.h"
#include "../src/eqcat.hpp"

using namespace fastdiff;

TEST_CASE("equation constructors") {
    EvolutionEquation d = make_equation(Family::Diffusion, parse("1/u"));
    CHECK(proved_zero(d.rhs - parse("u_xx/u - u_x^2/u^2")));
    EvolutionEquation p = make_equation(Family::Filtration, parse("1/v_x"));
    CHECK(proved_zero(p.rhs - parse("v_xx/v_x")));
    EvolutionEquation h = make_equation(Family::Filtration, parse("1"));
    CHECK(h.rhs == parse("v_xx"));
    EvolutionEquation by = make_equation(Family::Filtration, parse("1/(v_x^2+v_x)"));
    CHECK(proved_zero(by.rhs - parse("v_xx/(v_x^2+v_x)")));
    CHECK_THROWS_AS(make_equation(Family::Diffusion, parse("0")), EvalError);
    CHECK_THROWS_AS(make_equation(Family::Diffusion, parse("u+x")), EvalError);
}

TEST_CASE("determining system for the fast diffusion potential") {
    DeterminingSystem sys = derive_determining_tau1(parse("1/s"));
    CHECK(sys.residuals.size() >= 4);
    CHECK(systems_equivalent(sys, reference_tau1_system()));

    // a system differing in one structural term must not match
    DeterminingSystem broken = reference_tau1_system();
    broken.residuals[0] = broken.residuals[0] + Expr::funcsym("xi", {"t", "x", "v"});
    CHECK(!systems_equivalent(sys, broken));

    CHECK_THROWS_AS(derive_determining_tau1(parse("exp(s)")), EvalError);
}

TEST_CASE("heat-equation determining system keeps translations") {
    DeterminingSystem sys = derive_determining_tau1(parse("1"));
    // xi = 1, theta = 0 must satisfy every residual
    for (const Expr& r : sys.residuals) {
        Expr c = substitute_funcsym_values(r, "xi", Expr::num(1));
        c = substitute_funcsym_values(c, "theta", Expr::num(0));
        CHECK(verdict_zero(is_zero(c).verdict));
    }
}

TEST_CASE("v-independent restriction matches the eta system") {
    DeterminingSystem sys = restrict_v_independent(derive_determining_tau1(parse("1/s")));
    CHECK(systems_equivalent(sys, reference_eta_system()));
}

TEST_CASE("single theta determining equation") {
    CHECK(proved_zero(nogo_theta_residual(parse("exp(x)"))));
    CHECK(nogo_theta_residual(parse("1")).is_zero_literal());
    CHECK(!verdict_zero(is_zero(nogo_theta_residual(parse("t"))).verdict));
    CHECK_THROWS_AS(nogo_theta_residual(parse("0")), EvalError);
}

TEST_CASE("eta ansatz residuals") {
    // eta1 = 1, eta2 = -2cot(x-t) solves the whole system
    for (const Expr& r : nogo_eta_system(parse("1/s"), parse("1"), parse("-2*cot(x-t)")))
        CHECK(verdict_zero(is_zero(r).verdict));

    // eta2 = e^x alone does not
    bool any_nonzero = false;
    for (const Expr& r : nogo_eta_system(parse("1/s"), parse("0"), parse("exp(x)")))
        if (!verdict_zero(is_zero(r).verdict)) any_nonzero = true;
    CHECK(any_nonzero);

    CHECK(nogo_eta_system(parse("1/s"), parse("0"), parse("0")).empty());
    CHECK_THROWS_AS(nogo_eta_system(parse("1/s"), parse("u"), parse("0")), EvalError);
}

TEST_CASE("xi family satisfies xi_vv = xi xi_v") {
    std::vector<Expr> family = {
        parse("a"),
        parse("-2/(v+a)"),
        parse("-2*m*cot(m*(v+a))"),
        parse("-2*m*tanh(m*(v+a))"),
        parse("-2*m*coth(m*(v+a))"),
    };
    for (const Expr& xi : family) {
        Expr r = differentiate(differentiate(xi, "v"), "v") - xi * differentiate(xi, "v");
        CHECK(verdict_zero(is_zero(r).verdict));
    }
}

TEST_CASE("equivalence group action on f") {
    EquationFamily fd = make_family(Family::Filtration, parse("1/s"));

    EquivGroupElement id;
    CHECK(apply_equivalence(id, fd).f == fd.f);

    EquivGroupElement hodo;  // x~ = v, v~ = x
    hodo.a1 = 0; hodo.a2 = 1; hodo.b1 = 1; hodo.b2 = 0;
    CHECK(proved_zero(apply_equivalence(hodo, fd).f - parse("1/s")));

    EquivGroupElement shear;  // x~ = x + v
    shear.a2 = 1;
    EquationFamily by = make_family(Family::Filtration, parse("1/(s^2+s)"));
    CHECK(proved_zero(apply_equivalence(shear, by).f - parse("1/s")));

    EquivGroupElement bad;
    bad.a1 = 2; bad.a2 = 1; bad.b1 = 2; bad.b2 = 1;
    CHECK_THROWS_AS(apply_equivalence(bad, fd), EvalError);
}

TEST_CASE("equivalence elements compose") {
    EquivGroupElement g1;
    g1.e1 = 2; g1.a1 = 1; g1.a2 = 1; g1.b2 = 1; g1.a3 = 3;
    EquivGroupElement g2;
    g2.a1 = 0; g2.a2 = 1; g2.b1 = 1; g2.b2 = 0; g2.e2 = 5;
    for (const char* f : {"1/s", "1"}) {
        EquationFamily fam = make_family(Family::Filtration, parse(f));
        Expr a = apply_equivalence(g2, apply_equivalence(g1, fam)).f;
        Expr b = apply_equivalence(compose(g2, g1), fam).f;
        CHECK(proved_zero(a - b));
    }
}
