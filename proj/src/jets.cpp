#include "jets.hpp"

namespace fastdiff {

namespace {

std::string jet_key(const std::string& dep, int a, int b) {
    return dep + "_" + std::string(a, 't') + std::string(b, 'x');
}

// jet orders (a,b) of every occurrence of dep, including the implicit
// zeroth-order dependence of function symbols with dep among their arguments
void collect_dep_symbols(const Expr& e, const std::string& dep,
                         std::map<std::string, std::pair<int, int>>& out) {
    const Node& n = e.node();
    if ((n.kind == Kind::Var || n.kind == Kind::Jet) && n.name == dep) {
        out.emplace(symbol_key(n), std::make_pair(n.jt, n.jx));
        return;
    }
    if (n.kind == Kind::FuncSym) {
        for (const std::string& a : n.args)
            if (a == dep) out.emplace(dep, std::make_pair(0, 0));
        return;
    }
    for (const Expr& k : n.kids) collect_dep_symbols(k, dep, out);
}

}  // namespace

Expr total_derivative(const Expr& e, char dir, const std::string& dep, int max_order) {
    std::string dvar(1, dir);
    std::vector<Expr> terms = {differentiate(e, dvar)};
    std::map<std::string, std::pair<int, int>> syms;
    collect_dep_symbols(e, dep, syms);
    for (const auto& [key, ab] : syms) {
        auto [a, b] = ab;
        if (dir == 't')
            ++a;
        else
            ++b;
        if (a + b > max_order) throw EvalError("total derivative exceeds jet order bound");
        terms.push_back(Expr::jet(dep, a, b) * differentiate(e, key));
    }
    return Expr::sum(std::move(terms));
}

Expr characteristic(const ReductionOperator& q) {
    return q.eta - q.tau * Expr::jet(q.dep, 1, 0) - q.xi * Expr::jet(q.dep, 0, 1);
}

std::map<std::pair<int, int>, Expr> prolongation_coefficients(const ReductionOperator& q, int r) {
    Expr Qc = characteristic(q);
    std::map<std::pair<int, int>, Expr> out;
    for (int a = 0; a <= r; ++a) {
        for (int b = 0; a + b <= r; ++b) {
            if (a + b == 0) continue;
            Expr d = Qc;
            for (int i = 0; i < a; ++i) d = total_derivative(d, 't', q.dep);
            for (int i = 0; i < b; ++i) d = total_derivative(d, 'x', q.dep);
            out[{a, b}] = d + q.tau * Expr::jet(q.dep, a + 1, b) + q.xi * Expr::jet(q.dep, a, b + 1);
        }
    }
    return out;
}

ReductionOperator normalize_operator(const ReductionOperator& q, const ProbeOptions& opt) {
    if (q.tau.is_one_literal()) return q;
    bool tau_zero = q.tau.is_zero_literal() || verdict_zero(is_zero(q.tau, opt).verdict);
    if (!tau_zero) return {q.dep, Expr::num(1), q.xi / q.tau, q.eta / q.tau};
    if (q.xi.is_one_literal()) return {q.dep, Expr::num(0), q.xi, q.eta};
    bool xi_zero = q.xi.is_zero_literal() || verdict_zero(is_zero(q.xi, opt).verdict);
    if (!xi_zero) return {q.dep, Expr::num(0), Expr::num(1), q.eta / q.xi};
    throw EvalError("operator must have a nonvanishing coefficient on d_t or d_x");
}

namespace {

Expr solve_linear(const Expr& a, const std::string& skey, const ProbeOptions& opt) {
    Expr a1 = differentiate(a, skey);
    if (contains_symbol(a1, skey)) throw EvalError("expression is not linear in " + skey);
    Expr a0 = substitute(a, {{skey, Expr::num(0)}});
    if (verdict_zero(is_zero(a1, opt).verdict)) throw EvalError("cannot solve for " + skey);
    return -a0 / a1;
}

}  // namespace

Expr conditional_invariance_residual(const EvolutionEquation& eq, const ReductionOperator& q,
                                     const ProbeOptions& opt) {
    if (eq.dep != q.dep) throw EvalError("operator and equation use different dependent variables");
    bool vertical = (q.tau.is_zero_literal() || verdict_zero(is_zero(q.tau, opt).verdict)) &&
                    (q.xi.is_zero_literal() || verdict_zero(is_zero(q.xi, opt).verdict));
    // a vertical operator has an unusable invariant-surface condition; fall
    // back to plain Lie invariance on the equation manifold
    ReductionOperator Q = vertical ? ReductionOperator{q.dep, Expr::num(0), Expr::num(0), q.eta}
                                   : normalize_operator(q, opt);
    const std::string& dep = q.dep;
    const Expr& F = eq.rhs;

    Expr G = Expr::jet(dep, 1, 0) - F;
    std::vector<Expr> terms = {Q.tau * differentiate(G, "t"), Q.xi * differentiate(G, "x"),
                               Q.eta * differentiate(G, dep)};
    auto pr = prolongation_coefficients(Q, 2);
    for (const auto& [ab, coeff] : pr) {
        Expr gk = differentiate(G, jet_key(dep, ab.first, ab.second));
        if (!gk.is_zero_literal()) terms.push_back(coeff * gk);
    }
    Expr R = Expr::sum(std::move(terms));

    // eliminate derivatives using the equation and the invariant-surface
    // condition, highest order first
    Substitution rules;
    if (vertical) {
        rules[jet_key(dep, 1, 2)] = total_derivative(total_derivative(F, 'x', dep), 'x', dep);
        rules[jet_key(dep, 2, 0)] = total_derivative(F, 't', dep);
        rules[jet_key(dep, 1, 1)] = total_derivative(F, 'x', dep);
        rules[jet_key(dep, 1, 0)] = F;
    } else if (Q.tau.is_one_literal()) {
        Expr C = Q.eta - Q.xi * Expr::jet(dep, 0, 1);  // dep_t on the surface
        rules[jet_key(dep, 1, 2)] = total_derivative(total_derivative(C, 'x', dep), 'x', dep);
        rules[jet_key(dep, 2, 0)] = total_derivative(C, 't', dep);
        rules[jet_key(dep, 1, 1)] = total_derivative(C, 'x', dep);
        rules[jet_key(dep, 1, 0)] = F;
        rules[jet_key(dep, 0, 3)] =
            solve_linear(total_derivative(F - C, 'x', dep), jet_key(dep, 0, 3), opt);
        rules[jet_key(dep, 0, 2)] = solve_linear(F - C, jet_key(dep, 0, 2), opt);
    } else {
        const Expr& H = Q.eta;  // dep_x on the surface
        rules[jet_key(dep, 1, 1)] = total_derivative(H, 't', dep);
        rules[jet_key(dep, 1, 0)] = F;
        rules[jet_key(dep, 0, 3)] = total_derivative(total_derivative(H, 'x', dep), 'x', dep);
        rules[jet_key(dep, 0, 2)] = total_derivative(H, 'x', dep);
        rules[jet_key(dep, 0, 1)] = H;
    }

    auto constrained = [&](const Expr& r) {
        for (const auto& [key, repl] : rules)
            if (contains_symbol(r, key)) return true;
        return false;
    };
    for (int pass = 0; pass < 10 && constrained(R); ++pass) R = substitute(R, rules);
    if (constrained(R)) throw EvalError("derivative elimination did not reach a fixed point");
    return R;
}

ZeroReport is_reduction_operator(const EvolutionEquation& eq, const ReductionOperator& q,
                                 const ProbeOptions& opt) {
    return is_zero(conditional_invariance_residual(eq, q, opt), opt);
}

}  // namespace fastdiff
