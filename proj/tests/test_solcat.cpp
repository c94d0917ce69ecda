#include <cmath>
#include <random>

#include "doctest.h"
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

void check_pair(const SolutionPair& p) {
    CAPTURE(p.key);
    if (p.u) CHECK(verdict_zero(pde_residual(*p.u, fd()).verdict));
    if (p.v) CHECK(verdict_zero(pde_residual(*p.v, pot()).verdict));
    for (const ZeroReport& r : potential_residuals(p, parse("1/u")))
        CHECK(verdict_zero(r.verdict));
}

}  // namespace

TEST_CASE("catalog solutions solve their equations") {
    for (long long e : {-1LL, 0LL, 1LL}) check_pair(lie_solution(1, {{"eps", Rat(e)}}));
    check_pair(lie_solution(2));
    for (long long m : {-1LL, 0LL, 1LL}) check_pair(lie_solution(3, {{"mu", Rat(m)}}));
    for (long long e : {-4LL, -1LL, 0LL, 1LL, 4LL}) check_pair(lie_solution(4, {{"eps", Rat(e)}}));
    for (int i = 5; i <= 8; ++i) check_pair(lie_solution(i));
    for (int i = 1; i <= 6; ++i) check_pair(nonlie_solution(i));
}

TEST_CASE("closed solution forms match the displayed expressions") {
    SolutionPair p = lie_solution(4, {{"eps", Rat(0)}});
    CHECK(proved_zero(p.u->expr - parse("2*t/x^2")));
    CHECK(proved_zero(p.v->expr + parse("2*t/x")));
    p = lie_solution(2);
    CHECK(proved_zero(p.u->expr - parse("exp(x)")));
    CHECK(proved_zero(p.v->expr - parse("exp(x)+t")));
    p = lie_solution(1, {{"eps", Rat(0)}});
    CHECK(proved_zero(p.u->expr - Expr::num(1)));
    CHECK(verdict_zero(is_zero(p.v->expr - Expr::var("x")).verdict));

    CHECK_THROWS_AS(lie_solution(9), EvalError);
    CHECK_THROWS_AS(lie_solution(1, {{"eps", Rat(2)}}), EvalError);
    CHECK_THROWS_AS(lie_solution(4, {{"eps", Rat(3)}}), EvalError);
    CHECK_THROWS_AS(nonlie_solution(0), EvalError);
}

TEST_CASE("difference-of-waves forms agree with the closed forms") {
    for (int i = 1; i <= 6; ++i) {
        SolutionPair p = nonlie_solution(i);
        REQUIRE(p.u_alt.has_value());
        CAPTURE(p.key);
        CHECK(verdict_zero(is_zero(p.u->expr - *p.u_alt).verdict));
    }
}

TEST_CASE("a wrong solution is rejected") {
    ExactSolution bad{"u", SolutionMode::Explicit, parse("t"), {}, {}};
    CHECK(!verdict_zero(pde_residual(bad, fd()).verdict));
    ExactSolution mismatch{"v", SolutionMode::Explicit, parse("t"), {}, {}};
    CHECK_THROWS_AS(pde_residual(mismatch, fd()), EvalError);
}

TEST_CASE("two-wave representation") {
    // difference of cotangents and closed form agree for random complex tuples
    std::mt19937_64 rng(0xFD5EEDull);
    std::uniform_int_distribution<int> d(-3, 3);
    auto cnum = [&] {
        int re = 0, im = 0;
        while (re == 0 && im == 0) { re = d(rng); im = d(rng); }
        return Expr::num(Rat(re)) + Expr::imag() * Expr::num(Rat(im));
    };
    int checked = 0;
    for (int k = 0; k < 50; ++k) {
        TwoWave w = two_wave(cnum(), cnum(), cnum(), cnum());
        Expr diff = w.cot_form - w.closed_form;
        double worst = 0;
        int pts = 0;
        for (int trial = 0; trial < 40 && pts < 5; ++trial) {
            double tt = 0.1 + 0.03 * d(rng) + 0.001 * trial, xx = 0.2 + 0.05 * d(rng);
            try {
                double scale = 1.0;
                std::complex<double> z = eval_scaled(diff, {{"t", tt}, {"x", xx}}, scale);
                worst = std::max(worst, std::abs(z) / std::max(1.0, scale));
                ++pts;
            } catch (const EvalError&) {
            }
        }
        if (pts == 5) {
            CHECK(worst <= 1e-10);
            ++checked;
        }
    }
    CHECK(checked >= 45);

    CHECK_THROWS_AS(two_wave(Expr::num(0), Expr::num(1), Expr::num(0), Expr::num(0)), EvalError);

    // a non-real tuple still solves the equation
    TwoWave w = two_wave(Expr::num(1), Expr::num(2), Expr::num(0), Expr::num(0));
    ExactSolution s{"u", SolutionMode::Explicit, w.closed_form, {}, {}};
    CHECK(verdict_zero(pde_residual(s, fd()).verdict));
}

TEST_CASE("real tuples give real solutions matching the primed list") {
    auto table = real_tuple_table();
    REQUIRE(table.size() == 6);
    std::vector<int> match = tuple_matchings();
    for (size_t k = 0; k < table.size(); ++k) {
        TwoWave w = two_wave(table[k][0], table[k][1], table[k][2], table[k][3]);
        CAPTURE(k);
        CHECK(verdict_zero(is_zero(w.closed_form - nonlie_solution(match[k]).u->expr).verdict));
        int pts = 0;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                double tt = -1.9 + 0.2 * i + 0.003, xx = -1.9 + 0.2 * j + 0.007;
                try {
                    std::complex<double> z = eval(w.closed_form, {{"t", tt}, {"x", xx}});
                    CHECK(std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.real())));
                    ++pts;
                } catch (const EvalError&) {
                }
            }
        CHECK(pts >= 300);
    }

    // (2,2,0,0) is real as well: the table lists representatives, not all reals
    TwoWave w = two_wave(Expr::num(2), Expr::num(2), Expr::num(0), Expr::num(0));
    std::complex<double> z = eval(w.closed_form, {{"t", 0.3}, {"x", 0.7}});
    CHECK(std::abs(z.imag()) <= 1e-12);
}

TEST_CASE("group action on solutions") {
    // the scaling with e3=4, e4=2 fixes the self-similar solution 2t/x^2
    SolutionPair p = lie_solution(4, {{"eps", Rat(0)}});
    G1Element s;
    s.e3 = 4; s.e4 = 2;
    SolutionPair q = apply_group(s, p);
    CHECK(proved_zero(q.u->expr - p.u->expr));

    G1Element xs;
    xs.e2 = Rat(1, 3);
    CHECK(proved_zero(apply_group(xs, lie_solution(5)).u->expr - parse("2*t/cos(x+1/3)^2")));
    G1Element ts;
    ts.e1 = 2;
    CHECK(proved_zero(apply_group(ts, lie_solution(2)).v->expr - parse("exp(x)+t+2")));

    // transformed pairs still solve everything, over a parameter grid
    for (long long e3 : {1LL, 2LL})
        for (long long e4 : {1LL, -2LL}) {
            G1Element g;
            g.e1 = 1; g.e2 = Rat(-1, 2); g.e3 = e3; g.e4 = e4;
            check_pair(apply_group(g, lie_solution(6)));
            check_pair(apply_group(g, nonlie_solution(4)));
        }
    G2Element g2;
    g2.e1 = 1; g2.e3 = 2; g2.e4 = -1;
    check_pair(apply_group(g2, lie_solution(7)));
    g2.hodograph = true;
    CHECK_THROWS_AS(apply_group(g2, lie_solution(7)), EvalError);

    G1Element bad;
    bad.e4 = 0;
    CHECK_THROWS_AS(apply_group(bad, p), EvalError);
}

TEST_CASE("modified pairs keep solving the equations") {
    PairModifier m;
    m.sx = Rat(1, 2);
    m.bv = -Expr::pi();
    check_pair(modify(nonlie_solution(2), m));
    m.sx = Rat(-1, 2);
    m.tshift = Expr::pi() / Expr::num(2);
    check_pair(modify(nonlie_solution(5), m));
    PairModifier bad;
    bad.sx = Rat(0);
    CHECK_THROWS_AS(modify(nonlie_solution(1), bad), EvalError);
}

TEST_CASE("numeric hodograph image") {
    // pair 2 maps to u~ = 1/(y - t)
    NumericPair h = apply_hodograph(lie_solution(2), -30, 5);
    for (double tt : {-0.5, 0.0, 1.0})
        for (double y : {1.5, 2.0, 3.0}) {
            if (y - tt < std::exp(-30) + 1e-6) continue;
            CHECK(h.u(tt, y) == doctest::Approx(1.0 / (y - tt)).epsilon(1e-8));
            CHECK(h.v(tt, y) == doctest::Approx(std::log(y - tt)).epsilon(1e-8));
        }

    // inversion consistency: v~(t, v(t,x)) = x and u~ = 1/u
    SolutionPair p = lie_solution(6);
    NumericPair g = apply_hodograph(p, 0.05, 8);
    for (double tt : {0.5, 1.0})
        for (double xx : {0.3, 0.9, 2.0}) {
            double y = sample(*p.v, tt, xx);
            CHECK(std::abs(g.v(tt, y) - xx) <= 1e-8);
            CHECK(std::abs(g.u(tt, y) * sample(*p.u, tt, xx) - 1.0) <= 1e-8);
        }
}

TEST_CASE("hodograph arrows") {
    for (const Arrow& a : arrow_catalog()) {
        ArrowReport r = check_arrow(a.id);
        CAPTURE(a.id);
        CHECK(r.verified);
        CHECK(r.samples >= 30);
        CHECK(r.max_err <= 1e-8);
    }
    CHECK(arrow_catalog().size() == 15);
    CHECK_THROWS_AS(check_arrow("arrow.lie.99"), EvalError);
}

TEST_CASE("implicit profile of solution 8") {
    // the integrated profile satisfies its defining equation
    double mu = 1.0;
    for (double w : {-0.8, -0.2, 0.4, 0.9}) {
        double h = 1e-5;
        double lhs = (lie8_theta(mu, w + h) - lie8_theta(mu, w - h)) / (2 * h);
        double th = lie8_theta(mu, w);
        CHECK(lhs == doctest::Approx(th - 1 + mu * std::exp(-th)).epsilon(1e-7));
    }
    // finite-difference residual of the sampled solution
    double t0 = 1.3, x0 = 0.4, h = 1e-4;
    auto lnu = [&](double tt, double xx) { return std::log(lie8_sample(1.0, tt, xx)); };
    double ut = (lie8_sample(1.0, t0 + h, x0) - lie8_sample(1.0, t0 - h, x0)) / (2 * h);
    double lap = (lnu(t0, x0 + h) - 2 * lnu(t0, x0) + lnu(t0, x0 - h)) / (h * h);
    CHECK(std::abs(ut - lap) <= 1e-4);
    CHECK_THROWS_AS(lie8_sample(1.0, 0.0, 0.0), EvalError);
}

TEST_CASE("solution keys") {
    CHECK(solution_keys().size() == 14);
    CHECK(find_solution("lie.5").u.has_value());
    CHECK(find_solution("nonlie.3p").v.has_value());
    CHECK_THROWS_AS(find_solution("lie.9"), EvalError);
}
