#include "reduce.hpp"

#include "poly.hpp"

namespace fastdiff {

InvariantCheck verify_invariants(const ReductionOperator& q, const InvariantPair& inv,
                                 const ProbeOptions& opt) {
    auto act = [&](const Expr& e) {
        return q.tau * differentiate(e, "t") + q.xi * differentiate(e, "x") +
               q.eta * differentiate(e, q.dep);
    };
    InvariantCheck c;
    c.q_zeta_zero = verdict_zero(is_zero(act(inv.zeta), opt).verdict);
    c.q_omega_zero = verdict_zero(is_zero(act(inv.omega), opt).verdict);
    Expr zd = differentiate(inv.zeta, q.dep);
    c.zeta_dep_nonzero = !verdict_zero(is_zero(zd, opt).verdict);
    const char* vars[3] = {"t", "x", q.dep.c_str()};
    for (int i = 0; i < 3 && !c.independent; ++i)
        for (int j = i + 1; j < 3 && !c.independent; ++j) {
            Expr minor = differentiate(inv.zeta, vars[i]) * differentiate(inv.omega, vars[j]) -
                         differentiate(inv.zeta, vars[j]) * differentiate(inv.omega, vars[i]);
            if (!verdict_zero(is_zero(minor, opt).verdict)) c.independent = true;
        }
    c.ok = c.q_zeta_zero && c.q_omega_zero && c.independent && c.zeta_dep_nonzero;
    return c;
}

ReducedODE reduce(const EvolutionEquation& L, const ReductionOperator& q, const InvariantPair& inv,
                  const ProbeOptions& opt) {
    InvariantCheck c = verify_invariants(q, inv, opt);
    if (!c.ok) throw EvalError("invariant pair fails verification for the operator");
    if (!verdict_zero(is_reduction_operator(L, q, opt).verdict))
        throw EvalError("operator does not satisfy the invariance criterion");
    if (inv.omega != Expr::var("x")) throw EvalError("reduction implemented for omega = x only");

    const std::string& dep = L.dep;
    Expr B = differentiate(inv.zeta, dep);
    if (contains_symbol(B, dep)) throw EvalError("zeta must be linear in the dependent variable");
    Expr A = substitute(inv.zeta, {{dep, Expr::num(0)}});
    Expr phi = Expr::opaque("phi", 0, Expr::var("x"));
    Expr D = (phi - A) / B;  // the implicit ansatz zeta = phi(omega), solved for dep

    std::map<std::string, Expr> syms;
    collect_symbols(L.rhs, syms);
    Substitution sub;
    sub[dep] = D;
    for (const auto& [key, e] : syms) {
        const Node& n = e.node();
        if (n.kind != Kind::Jet || n.name != dep) continue;
        Expr d = D;
        for (int i = 0; i < n.jt; ++i) d = differentiate(d, "t");
        for (int i = 0; i < n.jx; ++i) d = differentiate(d, "x");
        sub[key] = d;
    }
    Expr r = differentiate(D, "t") - substitute(L.rhs, sub);

    AtomTable at;
    RationalForm rf = to_rational(r, at);
    Expr num = from_poly(rf.num, at);
    if (contains_symbol(num, "t") || contains_symbol(num, dep))
        throw EvalError("reduction left eliminated variables in the residual");

    ReducedODE ode;
    ode.residual = substitute(num, {{"x", Expr::var("w")}});
    return ode;
}

ZeroReport ode_profile_check(const ReducedODE& ode, const Expr& profile_in_w,
                             const ProbeOptions& opt) {
    return is_zero(substitute_opaque(ode.residual, ode.phi, profile_in_w, ode.omega), opt);
}

ZeroReport f_profile_check(const Expr& f_in_w, const ProbeOptions& opt) {
    Expr f1 = differentiate(f_in_w, "w");
    return is_zero(differentiate(f1, "w") - f_in_w * f1, opt);
}

ZeroReport separation_check(const Expr& v, Separation mode, const Expr& lambda,
                            const ProbeOptions& opt) {
    if (mode == Separation::AdditiveTraveling) {
        Expr p = Expr::var("p"), qq = Expr::var("q");
        Expr w = substitute(v, {{"x", (p + qq) / Expr::num(2)},
                                {"t", (p - qq) / (Expr::num(2) * lambda)}});
        return is_zero(differentiate(differentiate(w, "p"), "q"), opt);
    }
    Expr lnv = Expr::apply(FuncTag::LnAbs, v);
    return is_zero(differentiate(differentiate(lnv, "t"), "x"), opt);
}

}  // namespace fastdiff
