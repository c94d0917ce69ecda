#pragma once

#include "eqcat.hpp"

namespace fastdiff {

// Invertible point transformation on (t, x, dep). `fwd` gives the new
// coordinates as expressions in the old ones; `inv` gives the old coordinates
// as expressions written in the same three names read as new coordinates.
struct PointTransformation {
    std::vector<std::string> vars;
    std::vector<Expr> fwd;
    std::vector<Expr> inv;
};

PointTransformation compose(const PointTransformation& after, const PointTransformation& first);
Expr transformation_jacobian(const PointTransformation& g);
// round-trip residuals fwd(inv) - id, one per coordinate
std::vector<Expr> inverse_residuals(const PointTransformation& g);

ReductionOperator push_forward(const PointTransformation& g, const ReductionOperator& q);

// u~(t~,x~) = e3^-1 e4^2 u(e3 t~ + e1, e4 x~ + e2); e3*e4 != 0
struct G1Element {
    Rat e1{0}, e2{0}, e3{1}, e4{1};
};
// t~ = e3 t + e1, x~ = e4 x + e2, v~ = (e3/e4) v, optionally composed with the
// x <-> v hodograph branch; e3*e4 != 0
struct G2Element {
    Rat e1{0}, e2{0}, e3{1}, e4{1};
    bool hodograph = false;
};

PointTransformation g1_transformation(const G1Element& g);
PointTransformation g2_transformation(const G2Element& g);
// t~ = t, x~ = v, v~ = x on the filtration space (u-component u~ = 1/u lives
// at the solution level in solcat)
PointTransformation potential_hodograph();

struct EquivalenceVerdict {
    bool equivalent = false;
    double max_abs = 0.0;
};

// proportionality of (tau, xi, eta) with a nonvanishing multiplier
EquivalenceVerdict operators_equivalent(const ReductionOperator& a, const ReductionOperator& b,
                                        const ProbeOptions& opt = {});
EquivalenceVerdict operators_equivalent_mod_group(const PointTransformation& g,
                                                  const ReductionOperator& a,
                                                  const ReductionOperator& b,
                                                  const ProbeOptions& opt = {});

// Q = d_t + xi(t,x) d_x + theta(t,x) d_v  ->  Q' = d_x + ((-xi u + theta)/f(u)) d_u
ReductionOperator potential_to_nogo(const ReductionOperator& q_pot, const Expr& f_univariate);
// d_x + ((eta1 u + eta2)/f(u)) d_u
ReductionOperator gandarias_ansatz_operator(const Expr& eta1, const Expr& eta2,
                                            const Expr& f_univariate);

enum class Algebra { A1, A2 };
std::vector<ReductionOperator> lie_generators(Algebra a);

// selector examples: case 1 "eps=1.f=inv", case 2 "f=cot",
// case 3 "phi=t+expx" or "phi=t*f.f=coth", case 4 "chi=tan2t*tanhx",
// case 5 "chi=exp1". Throws EvalError on invalid selectors.
ReductionOperator theorem1_operator(int case_index, const std::string& selector);

struct CatalogOperator {
    std::string key;
    EvolutionEquation eq;
    ReductionOperator op;
};

// every addressable operator with its equation, in stable key order
const std::vector<CatalogOperator>& operator_catalog();
const CatalogOperator* find_operator(const std::string& key);

}  // namespace fastdiff
