#pragma once

#include <vector>

#include "jets.hpp"

namespace fastdiff {

enum class Family { Diffusion, Filtration };

// A nonlinearity f stored as a univariate expression in the internal
// variable "s" (substituted by u or v_x when the equation is built).
struct EquationFamily {
    Family family;
    Expr f;
};

EquationFamily make_family(Family family, const Expr& f_univariate);

// diffusion: u_t = f(u) u_xx + f'(u) u_x^2; filtration: v_t = f(v_x) v_xx
EvolutionEquation make_equation(const EquationFamily& fam);
EvolutionEquation make_equation(Family family, const Expr& f_univariate);

struct DeterminingSystem {
    std::vector<std::pair<std::string, std::vector<std::string>>> unknowns;
    std::vector<Expr> residuals;
};

// Determining system on xi(t,x,v), theta(t,x,v) for Q = d_t + xi d_x + theta d_v
// acting on v_t = f(v_x) v_xx, split by powers of v_x after clearing
// denominators. Throws if f is not rational in its argument.
DeterminingSystem derive_determining_tau1(const Expr& f_univariate, const ProbeOptions& opt = {});

// the four-equation system satisfied by xi, theta when f = 1/v_x
DeterminingSystem reference_tau1_system();
// the three-equation system on eta1(t,x), eta2(t,x) for f = 1/u, kept with a
// dummy third argument v so both systems live over comparable symbols
DeterminingSystem reference_eta_system();

// drop all v-derivatives of the unknowns and rename xi -> -eta1, theta -> eta2
DeterminingSystem restrict_v_independent(const DeterminingSystem& sys);

// zero-set equivalence: mutual constant-coefficient span of the residual lists
bool systems_equivalent(const DeterminingSystem& a, const DeterminingSystem& b);

// left minus right of the single tau=0 determining equation on theta(t,x,v)
Expr nogo_theta_residual(const Expr& theta, const ProbeOptions& opt = {});

// Residuals for the ansatz eta = (eta1*u + eta2)/f(u) with eta1, eta2 concrete
// expressions in (t,x): the invariance residual of d_x + eta d_u on the
// diffusion equation, denominators cleared, split by powers of u.
std::vector<Expr> nogo_eta_system(const Expr& f_univariate, const Expr& eta1, const Expr& eta2,
                                  const ProbeOptions& opt = {});

// t~ = e1 t + e2, x~ = a1 x + a2 v + a3, v~ = b1 x + b2 v + b3
struct EquivGroupElement {
    Rat e1{1}, e2{0};
    Rat a1{1}, a2{0}, a3{0};
    Rat b1{0}, b2{1}, b3{0};
};

bool is_degenerate(const EquivGroupElement& g);
EquivGroupElement compose(const EquivGroupElement& after, const EquivGroupElement& first);
EquationFamily apply_equivalence(const EquivGroupElement& g, const EquationFamily& fam);

}  // namespace fastdiff
