#include "doctest.h"
#include "../src/reduce.hpp"
#include "../src/solcat.hpp"

using namespace fastdiff;

namespace {

const EvolutionEquation& fd() {
    static EvolutionEquation eq = make_equation(Family::Diffusion, parse("1/u"));
    return eq;
}
const EvolutionEquation& pot() {
    static EvolutionEquation eq = make_equation(Family::Filtration, parse("1/v_x"));
    return eq;
}

}  // namespace

TEST_CASE("invariant pairs") {
    // travelling operator with profile -2/(x+t); omega = x - t is the flow invariant
    ReductionOperator q{"v", parse("1"), parse("1"), parse("-2/(x+t)")};
    InvariantCheck c = verify_invariants(q, {parse("v + lnabs(x+t)"), parse("x - t")});
    CHECK(c.ok);

    ReductionOperator dt{"v", parse("1"), parse("0"), parse("0")};
    CHECK(verify_invariants(dt, {parse("v"), parse("x")}).ok);

    c = verify_invariants(dt, {parse("t"), parse("x")});
    CHECK(!c.ok);
    CHECK(!c.zeta_dep_nonzero);

    // zeta a function of omega: not independent
    c = verify_invariants(dt, {parse("v"), parse("v^2")});
    CHECK(!c.independent);

    // not an integral
    c = verify_invariants(dt, {parse("v + t"), parse("x")});
    CHECK(!c.q_zeta_zero);
}

TEST_CASE("reduction to an ordinary differential equation") {
    // stationary reduction: v = phi(x) gives phi'' = 0
    ReductionOperator dt{"v", parse("1"), parse("0"), parse("0")};
    ReducedODE ode = reduce(pot(), dt, {parse("v"), parse("x")});
    CHECK(!contains_symbol(ode.residual, "t"));
    CHECK(verdict_zero(ode_profile_check(ode, parse("w")).verdict));
    CHECK(verdict_zero(ode_profile_check(ode, parse("3 - 2*w")).verdict));
    CHECK(!verdict_zero(ode_profile_check(ode, parse("w^2")).verdict));

    // case-1 operator with f = -2/x: phi_ww = f(w) phi_w
    ReductionOperator q1{"v", parse("1"), parse("0"), parse("-2/x")};
    ode = reduce(pot(), q1, {parse("v + 2*t/x"), parse("x")});
    CHECK(!contains_symbol(ode.residual, "t"));
    CHECK(verdict_zero(ode_profile_check(ode, parse("1/w")).verdict));
    CHECK(verdict_zero(ode_profile_check(ode, parse("5")).verdict));
    CHECK(!verdict_zero(ode_profile_check(ode, parse("w")).verdict));

    // classical similarity substitution u = t phi(x)
    ReductionOperator sc{"u", parse("t"), parse("0"), parse("u")};
    ode = reduce(fd(), sc, {parse("u/t"), parse("x")});
    CHECK(!contains_symbol(ode.residual, "t"));
    CHECK(!contains_symbol(ode.residual, "u"));
    // profiles extracted from catalog solutions u = t*phi(x)
    CHECK(verdict_zero(ode_profile_check(ode, parse("2/cos(w)^2")).verdict));
    CHECK(verdict_zero(ode_profile_check(ode, parse("-2/cosh(w)^2")).verdict));
    CHECK(verdict_zero(ode_profile_check(ode, parse("2/sinh(w)^2")).verdict));
    CHECK(!verdict_zero(ode_profile_check(ode, parse("w")).verdict));
}

TEST_CASE("reduction preconditions") {
    ReductionOperator dt{"v", parse("1"), parse("0"), parse("0")};
    CHECK_THROWS_AS(reduce(pot(), dt, {parse("v + t"), parse("x")}), EvalError);
    CHECK_THROWS_AS(reduce(pot(), dt, {parse("v"), parse("t")}), EvalError);
    CHECK_THROWS_AS(reduce(pot(), dt, {parse("v^2"), parse("x")}), EvalError);

    ReductionOperator bad{"v", parse("1"), parse("0"), parse("v*x")};
    CHECK_THROWS_AS(reduce(pot(), bad, {parse("v"), parse("x")}), EvalError);
}

TEST_CASE("profile equation f'' = f f'") {
    for (const char* f : {"-2/w", "-2*cot(w)", "-2*tanh(w)", "-2*coth(w)"}) {
        CAPTURE(f);
        CHECK(verdict_zero(f_profile_check(parse(f)).verdict));
    }
    CHECK(!verdict_zero(f_profile_check(parse("w")).verdict));
    CHECK(verdict_zero(f_profile_check(parse("7")).verdict));  // constants solve it
}

TEST_CASE("separation of variables") {
    // additive travelling separation of the primed v-forms
    for (int i = 1; i <= 4; ++i) {
        CAPTURE(i);
        Expr v = nonlie_solution(i).v->expr;
        CHECK(verdict_zero(separation_check(v, Separation::AdditiveTraveling).verdict));
    }
    // multiplicative separation of solutions 5, 6, 7
    for (int i = 5; i <= 7; ++i) {
        CAPTURE(i);
        Expr v = lie_solution(i).v->expr;
        CHECK(verdict_zero(separation_check(v, Separation::Multiplicative).verdict));
    }
    CHECK(!verdict_zero(separation_check(parse("x + t^2"), Separation::AdditiveTraveling).verdict));
    CHECK(!verdict_zero(
        separation_check(nonlie_solution(4).v->expr, Separation::Multiplicative).verdict));
    // lambda other than 1
    CHECK(verdict_zero(separation_check(parse("lnabs(x - 2*t) + (x + 2*t)^3"),
                                        Separation::AdditiveTraveling, Expr::num(2))
                           .verdict));
}
