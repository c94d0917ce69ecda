#pragma once

#include <map>

#include "zero.hpp"

namespace fastdiff {

// Q = tau*d_t + xi*d_x + eta*d_dep acting on scalar evolution equations
// dep_t = rhs(t, x, dep, dep_x, dep_xx)
struct ReductionOperator {
    std::string dep = "u";
    Expr tau, xi, eta;
};

struct EvolutionEquation {
    std::string dep = "u";
    Expr rhs;
};

// Total derivative along t or x: jet variables are promoted, the chain closes
// at `max_order` (throws beyond it).
Expr total_derivative(const Expr& e, char dir, const std::string& dep, int max_order = 8);

// characteristic Q[dep] = eta - tau*dep_t - xi*dep_x
Expr characteristic(const ReductionOperator& q);

// second-prolongation coefficients eta^{(a,b)} for 1 <= a+b <= r
std::map<std::pair<int, int>, Expr> prolongation_coefficients(const ReductionOperator& q, int r);

// Rescale so tau == 1, or (tau == 0, xi == 1). Uses `opt` to decide whether a
// coefficient vanishes identically. Throws EvalError for the zero operator.
ReductionOperator normalize_operator(const ReductionOperator& q, const ProbeOptions& opt = {});

// Invariance residual of the prolonged operator on the equation manifold
// intersected with the invariant-surface condition; an expression in
// t, x, dep, dep_x only.
Expr conditional_invariance_residual(const EvolutionEquation& eq, const ReductionOperator& q,
                                     const ProbeOptions& opt = {});

ZeroReport is_reduction_operator(const EvolutionEquation& eq, const ReductionOperator& q,
                                 const ProbeOptions& opt = {});

}  // namespace fastdiff
