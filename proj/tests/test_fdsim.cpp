#include <algorithm>

#include "doctest.h"
#include "../src/fdsim.hpp"

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

TEST_CASE("steady states are reproduced exactly") {
    Grid g{-1, 1, 33, 0, 0.5, 1e-3};
    Oracle one = [](double, double) { return 1.0; };
    SimResult r = simulate(fd(), one, g);
    CHECK(r.max_err <= 1e-13);
    CHECK(r.mass_drift_rel <= 1e-13);
    r = simulate(fd(), one, g, Scheme::ImplicitNewton);
    CHECK(r.max_err <= 1e-13);

    // u = e^x is in the kernel of the discrete operator as well
    SolutionPair p = lie_solution(2);
    g.dt = stable_dt(fd(), make_oracle(*p.u), g);
    r = simulate(fd(), make_oracle(*p.u), g);
    CHECK(r.max_err <= 1e-12);
}

TEST_CASE("fixed-grid accuracy and conservation") {
    SolutionPair p = lie_solution(6);
    Grid g{-1, 1, 201, -2, -1, 0};
    Oracle o = make_oracle(*p.u);
    g.dt = stable_dt(fd(), o, g);
    CHECK(g.dt > 0.0);
    SimResult r = simulate(fd(), o, g);
    CHECK(r.max_err <= 1e-3);
    CHECK(r.l2_err <= 1e-3);
    CHECK(r.mass_drift_rel <= 1e-6);
    CHECK(r.sigma < 0.5);
    CHECK(r.steps * g.dt >= doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("second-order convergence, explicit scheme") {
    SolutionPair p4 = lie_solution(4, {{"eps", Rat{1}}});
    Grid g{-1, 1, 17, 1, 2, 0};
    Oracle o = make_oracle(*p4.u);
    g.dt = stable_dt(fd(), o, g);
    ErrorReport rep = convergence_study(fd(), o, g, 4);
    CHECK(rep.levels.size() == 4);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));
    for (size_t i = 1; i < rep.levels.size(); ++i)
        CHECK(rep.levels[i].max_err < rep.levels[i - 1].max_err);

    SolutionPair p6 = lie_solution(6);
    Grid g6{-1, 1, 17, -2, -1.5, 0};
    Oracle o6 = make_oracle(*p6.u);
    g6.dt = stable_dt(fd(), o6, g6);
    rep = convergence_study(fd(), o6, g6, 4);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));

    std::string csv = to_csv(rep);
    CHECK(csv.rfind("level,h,dt,max_err,l2_err,order\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("second-order convergence, implicit scheme") {
    SolutionPair p = lie_solution(6);
    Grid g{-1, 1, 17, -2, -1.5, 0};
    Oracle o = make_oracle(*p.u);
    g.dt = stable_dt(fd(), o, g);
    ErrorReport rep = convergence_study(fd(), o, g, 3, Scheme::ImplicitNewton);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("filtration form") {
    SolutionPair p = nonlie_solution(4);  // v_x > 0 requires t < 0 here
    Grid g{-1, 1, 17, -0.8, -0.3, 0};
    Oracle o = make_oracle(*p.v);
    g.dt = stable_dt(pot(), o, g, 0.05);
    ErrorReport rep = convergence_study(pot(), o, g, 4);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));
    rep = convergence_study(pot(), o, g, 3, Scheme::ImplicitNewton);
    CHECK(rep.observed_order == doctest::Approx(2.0).epsilon(0.15));

    // flat data has a vanishing gradient, which the scheme must refuse
    Grid gf{-1, 1, 17, 0, 0.1, 1e-4};
    Oracle flat = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(simulate(pot(), flat, gf), EvalError);
}

TEST_CASE("truncation residual shrinks at second order") {
    SolutionPair p = lie_solution(6);
    Oracle o = make_oracle(*p.u);
    Grid g{-1, 1, 17, -1.7, -1.0, 1e-4};
    double r1 = truncation_residual(fd(), o, g);
    g.n = 33;
    double r2 = truncation_residual(fd(), o, g);
    g.n = 65;
    double r3 = truncation_residual(fd(), o, g);
    CHECK(r1 / r2 > 3.4);
    CHECK(r1 / r2 < 4.6);
    CHECK(r2 / r3 > 3.4);
    CHECK(r2 / r3 < 4.6);
}

TEST_CASE("failure modes") {
    SolutionPair p5 = lie_solution(5);  // u = 2t/cos(x)^2 changes sign at t = 0
    Grid g{-1, 1, 33, -0.5, 0.5, 1e-5};
    CHECK_THROWS_AS(simulate(fd(), make_oracle(*p5.u), g), EvalError);

    SolutionPair p4 = lie_solution(4, {{"eps", Rat{0}}});  // pole at x = 0 inside the box
    Grid gp{-1, 1, 33, 1, 2, 1e-5};
    CHECK_THROWS(simulate(fd(), make_oracle(*p4.u), gp));

    Oracle one = [](double, double) { return 1.0; };
    Grid small{-1, 1, 5, 0, 1, 1e-4};
    CHECK_THROWS_AS(simulate(fd(), one, small), EvalError);
    Grid nodt{-1, 1, 33, 0, 1, 0};
    CHECK_THROWS_AS(simulate(fd(), one, nodt), EvalError);
    Grid ok{-1, 1, 33, 0, 1, 1e-4};
    CHECK_THROWS_AS(convergence_study(fd(), one, ok, 2), EvalError);
    EvolutionEquation other = make_equation(Family::Diffusion, parse("s"));
    CHECK_THROWS_AS(simulate(other, one, ok), EvalError);
}
