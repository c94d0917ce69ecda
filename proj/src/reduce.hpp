#pragma once

#include "eqcat.hpp"

namespace fastdiff {

// two functionally independent integrals of the operator, written in (t, x, dep)
struct InvariantPair {
    Expr zeta;
    Expr omega;
};

struct InvariantCheck {
    bool ok = false;
    bool q_zeta_zero = false;
    bool q_omega_zero = false;
    bool independent = false;
    bool zeta_dep_nonzero = false;
};
InvariantCheck verify_invariants(const ReductionOperator& q, const InvariantPair& inv,
                                 const ProbeOptions& opt = {});

// residual of the reduced equation in the variable `omega`, with the unknown
// appearing as opaque applications phi^(k)(omega)
struct ReducedODE {
    std::string omega = "w";
    std::string phi = "phi";
    Expr residual;
};

// substitute the ansatz zeta = phi(omega) and eliminate (t, x, dep); restricted
// to omega = x and zeta linear in dep. Throws when the invariants fail, the
// operator is not a reduction operator, or elimination leaves t behind.
ReducedODE reduce(const EvolutionEquation& L, const ReductionOperator& q, const InvariantPair& inv,
                  const ProbeOptions& opt = {});

// insert a concrete profile phi(w) into the reduced residual
ZeroReport ode_profile_check(const ReducedODE& ode, const Expr& profile_in_w,
                             const ProbeOptions& opt = {});

// f'' - f f' for a profile in w
ZeroReport f_profile_check(const Expr& f_in_w, const ProbeOptions& opt = {});

enum class Separation { AdditiveTraveling, Multiplicative };
// additive: mixed second derivative in p = x + lambda t, q = x - lambda t;
// multiplicative: mixed (t,x) derivative of ln|v|
ZeroReport separation_check(const Expr& v, Separation mode, const Expr& lambda = Expr::num(1),
                            const ProbeOptions& opt = {});

}  // namespace fastdiff
