#include "doctest.h"
#include "../src/jets.hpp"

using namespace fastdiff;

namespace {

// u_t = (u^-1 u_x)_x expanded
EvolutionEquation fast_diffusion() { return {"u", parse("u_xx/u - u_x^2/u^2")}; }
// v_t = v_xx / v_x
EvolutionEquation filtration() { return {"v", parse("v_xx/v_x")}; }

ReductionOperator op(const char* tau, const char* xi, const char* eta, const char* dep = "u") {
    return {dep, parse(tau), parse(xi), parse(eta)};
}

}  // namespace

TEST_CASE("total derivatives") {
    Expr e = parse("u^2*u_x");
    CHECK(total_derivative(e, 'x', "u") == parse("2*u*u_x^2 + u^2*u_xx"));
    CHECK(total_derivative(parse("t*u"), 't', "u") == parse("u + t*u_t"));
    CHECK(total_derivative(parse("x"), 'x', "u") == Expr::num(1));
    CHECK_THROWS_AS(total_derivative(parse("u_xx"), 'x', "u", 2), EvalError);
}

TEST_CASE("characteristic and prolongation") {
    ReductionOperator q = op("1", "0", "0");
    auto pr = prolongation_coefficients(q, 2);
    CHECK(pr[{1, 0}].is_zero_literal());
    CHECK(pr[{0, 2}].is_zero_literal());

    // first prolongation of x*d_x - 2u*d_u picks up -3*u_x on d_{u_x}
    ReductionOperator s = op("0", "x", "-2*u");
    auto ps = prolongation_coefficients(s, 1);
    CHECK(ps[{0, 1}] == parse("-3*u_x"));
    CHECK(ps[{1, 0}] == parse("-2*u_t"));
}

TEST_CASE("operator normalization") {
    ReductionOperator q = op("t", "t*x", "t*u + t^2");
    ReductionOperator n = normalize_operator(q);
    CHECK(n.tau.is_one_literal());
    CHECK(n.xi == parse("x"));
    CHECK(proved_zero(n.eta - parse("u + t")));
    CHECK_THROWS_AS(normalize_operator(op("0", "0", "u")), EvalError);
}

TEST_CASE("Lie symmetries annihilate the invariance residual") {
    EvolutionEquation L = fast_diffusion();
    for (auto q : {op("1", "0", "0"), op("0", "1", "0"), op("t", "0", "u"), op("0", "x", "-2*u")}) {
        ZeroReport r = is_reduction_operator(L, q);
        CHECK(verdict_zero(r.verdict));
    }
    EvolutionEquation P = filtration();
    for (auto q : {op("1", "0", "0", "v"), op("0", "1", "0", "v"), op("0", "0", "1", "v"),
                   op("t", "0", "v", "v"), op("0", "x", "-v", "v")}) {
        ZeroReport r = is_reduction_operator(P, q);
        CHECK(verdict_zero(r.verdict));
    }
}

TEST_CASE("non-symmetries are rejected") {
    EvolutionEquation L = fast_diffusion();
    CHECK(!verdict_zero(is_reduction_operator(L, op("1", "0", "u")).verdict));
    CHECK(!verdict_zero(is_reduction_operator(L, op("0", "1", "x*u")).verdict));
    CHECK(!verdict_zero(is_reduction_operator(filtration(), op("1", "1", "v", "v")).verdict));
}

TEST_CASE("nonclassical operators in evolution form") {
    // d_x + (u^2 - 2*cot(x-t)*u)*d_u on the fast diffusion equation
    ZeroReport r =
        is_reduction_operator(fast_diffusion(), op("0", "1", "u^2 - 2*cot(x-t)*u"));
    CHECK(verdict_zero(r.verdict));

    // d_t - d_x - 2*cot(x-t)*d_v on the potential equation
    ZeroReport p = is_reduction_operator(filtration(), op("1", "-1", "-2*cot(x-t)", "v"));
    CHECK(verdict_zero(p.verdict));

    // perturbing the coefficient breaks invariance
    ZeroReport b =
        is_reduction_operator(fast_diffusion(), op("0", "1", "u^2 - 2*tan(x-t)*u"));
    CHECK(!verdict_zero(b.verdict));
}

TEST_CASE("invariance residual is multiplier stable") {
    EvolutionEquation L = fast_diffusion();
    ReductionOperator q = op("0", "1", "u^2 - 2*cot(x-t)*u");
    ReductionOperator scaled = {"u", q.tau, parse("u") * q.xi, parse("u") * q.eta};
    CHECK(verdict_zero(is_reduction_operator(L, scaled).verdict));
    ReductionOperator scaled2 = {"u", q.tau, parse("x^2+1") * q.xi, parse("x^2+1") * q.eta};
    CHECK(verdict_zero(is_reduction_operator(L, scaled2).verdict));
}
