#include "eqcat.hpp"

#include "poly.hpp"

namespace fastdiff {

namespace {

const char* kArg = "s";

Expr fs(const std::string& name, int dt, int dx, int dv) {
    return Expr::funcsym(name, {"t", "x", "v"}, {dt, dx, dv});
}

}  // namespace

EquationFamily make_family(Family family, const Expr& f_univariate) {
    std::map<std::string, Expr> syms;
    collect_symbols(f_univariate, syms);
    if (syms.size() > 1) throw EvalError("nonlinearity must be univariate");
    Expr f = f_univariate;
    if (syms.size() == 1 && syms.begin()->first != kArg)
        f = substitute(f, {{syms.begin()->first, Expr::var(kArg)}});
    if (f.is_zero_literal() || proved_zero(f)) throw EvalError("nonlinearity is identically zero");
    return {family, f};
}

EvolutionEquation make_equation(const EquationFamily& fam) {
    if (fam.family == Family::Diffusion) {
        Expr fu = substitute(fam.f, {{kArg, Expr::var("u")}});
        Expr dfu = differentiate(fu, "u");
        return {"u", fu * Expr::jet("u", 0, 2) + dfu * Expr::pow(Expr::jet("u", 0, 1), 2)};
    }
    Expr fv = substitute(fam.f, {{kArg, Expr::jet("v", 0, 1)}});
    return {"v", fv * Expr::jet("v", 0, 2)};
}

EvolutionEquation make_equation(Family family, const Expr& f_univariate) {
    return make_equation(make_family(family, f_univariate));
}

DeterminingSystem derive_determining_tau1(const Expr& f_univariate, const ProbeOptions& opt) {
    EquationFamily fam = make_family(Family::Filtration, f_univariate);
    {
        // rationality check: every atom of f(v_x) must be the jet itself
        Expr fv = substitute(fam.f, {{kArg, Expr::jet("v", 0, 1)}});
        AtomTable at;
        RationalForm rf = to_rational(fv, at);
        for (const Expr& a : at.atoms)
            if (a != Expr::jet("v", 0, 1)) throw EvalError("nonlinearity is not rational in v_x");
    }
    ReductionOperator q{"v", Expr::num(1), fs("xi", 0, 0, 0), fs("theta", 0, 0, 0)};
    Expr R = conditional_invariance_residual(make_equation(fam), q, opt);

    AtomTable at;
    RationalForm rf = to_rational(R, at);
    int vx = at.intern(Expr::jet("v", 0, 1));
    DeterminingSystem sys;
    sys.unknowns = {{"xi", {"t", "x", "v"}}, {"theta", {"t", "x", "v"}}};
    for (const auto& [deg, coeff] : collect_by_atom(rf.num, vx)) sys.residuals.push_back(from_poly(coeff, at));
    return sys;
}

DeterminingSystem reference_tau1_system() {
    Expr xi = fs("xi", 0, 0, 0), th = fs("theta", 0, 0, 0);
    DeterminingSystem sys;
    sys.unknowns = {{"xi", {"t", "x", "v"}}, {"theta", {"t", "x", "v"}}};
    sys.residuals = {
        fs("xi", 0, 0, 2) - xi * fs("xi", 0, 0, 1),
        fs("xi", 1, 0, 0) - Expr::num(2) * fs("xi", 0, 1, 1) + fs("theta", 0, 0, 2) +
            fs("theta", 0, 0, 1) * xi - th * fs("xi", 0, 0, 1) + xi * fs("xi", 0, 1, 0),
        fs("theta", 0, 2, 0) - th * fs("theta", 0, 1, 0),
        fs("theta", 1, 0, 0) - Expr::num(2) * fs("theta", 0, 1, 1) + fs("xi", 0, 2, 0) +
            fs("xi", 0, 1, 0) * th - xi * fs("theta", 0, 1, 0) + th * fs("theta", 0, 0, 1),
    };
    return sys;
}

DeterminingSystem reference_eta_system() {
    Expr e1 = fs("eta1", 0, 0, 0), e2 = fs("eta2", 0, 0, 0);
    DeterminingSystem sys;
    sys.unknowns = {{"eta1", {"t", "x", "v"}}, {"eta2", {"t", "x", "v"}}};
    sys.residuals = {
        fs("eta2", 0, 2, 0) - e2 * fs("eta2", 0, 1, 0),
        fs("eta2", 1, 0, 0) - e2 * fs("eta1", 0, 1, 0) + e1 * fs("eta2", 0, 1, 0) - fs("eta1", 0, 2, 0),
        fs("eta1", 1, 0, 0) - e1 * fs("eta1", 0, 1, 0),
    };
    return sys;
}

DeterminingSystem restrict_v_independent(const DeterminingSystem& sys) {
    DeterminingSystem out;
    out.unknowns = {{"eta1", {"t", "x", "v"}}, {"eta2", {"t", "x", "v"}}};
    for (Expr r : sys.residuals) {
        for (const auto& [name, args] : sys.unknowns) r = drop_funcsym_derivatives(r, name, "v");
        r = substitute_funcsym(r, "xi", "eta1", CRat(Rat(-1)));
        r = substitute_funcsym(r, "theta", "eta2", CRat(1));
        if (!r.is_zero_literal() && !proved_zero(r)) out.residuals.push_back(r);
    }
    return out;
}

bool systems_equivalent(const DeterminingSystem& a, const DeterminingSystem& b) {
    AtomTable at;
    std::vector<Poly> pa, pb;
    for (const Expr& r : a.residuals) {
        Poly p = to_rational(r, at).num;
        if (!p.is_zero()) pa.push_back(p);
    }
    for (const Expr& r : b.residuals) {
        Poly p = to_rational(r, at).num;
        if (!p.is_zero()) pb.push_back(p);
    }
    for (const Poly& p : pa)
        if (!in_span(p, pb)) return false;
    for (const Poly& p : pb)
        if (!in_span(p, pa)) return false;
    return true;
}

Expr nogo_theta_residual(const Expr& theta, const ProbeOptions& opt) {
    if (theta.is_zero_literal() || verdict_zero(is_zero(theta, opt).verdict))
        throw EvalError("theta must not vanish identically");
    Expr tt = differentiate(theta, "t");
    Expr tx = differentiate(theta, "x");
    Expr tv = differentiate(theta, "v");
    Expr txx = differentiate(tx, "x");
    Expr txv = differentiate(tx, "v");
    Expr tvv = differentiate(tv, "v");
    return theta * tt - txx - Expr::num(2) * theta * txv - Expr::pow(theta, 2) * tvv +
           tx * tx / theta + Expr::num(2) * tx * tv + theta * tv * tv;
}

std::vector<Expr> nogo_eta_system(const Expr& f_univariate, const Expr& eta1, const Expr& eta2,
                                  const ProbeOptions& opt) {
    if (contains_symbol(eta1, "u") || contains_symbol(eta2, "u") || contains_symbol(eta1, "v") ||
        contains_symbol(eta2, "v"))
        throw EvalError("eta1, eta2 must depend on (t,x) only");
    EquationFamily fam = make_family(Family::Diffusion, f_univariate);
    Expr fu = substitute(fam.f, {{kArg, Expr::var("u")}});
    Expr eta = (eta1 * Expr::var("u") + eta2) / fu;
    ReductionOperator q{"u", Expr::num(0), Expr::num(1), eta};
    Expr R = conditional_invariance_residual(make_equation(fam), q, opt);

    AtomTable at;
    RationalForm rf = to_rational(R, at);
    int uid = at.intern(Expr::var("u"));
    std::vector<Expr> out;
    for (const auto& [deg, coeff] : collect_by_atom(rf.num, uid)) {
        Expr r = from_poly(coeff, at);
        if (!r.is_zero_literal()) out.push_back(r);
    }
    return out;
}

bool is_degenerate(const EquivGroupElement& g) {
    return g.e1.is_zero() || (g.a1 * g.b2 - g.a2 * g.b1).is_zero();
}

EquivGroupElement compose(const EquivGroupElement& g2, const EquivGroupElement& g1) {
    EquivGroupElement r;
    r.e1 = g2.e1 * g1.e1;
    r.e2 = g2.e1 * g1.e2 + g2.e2;
    r.a1 = g2.a1 * g1.a1 + g2.a2 * g1.b1;
    r.a2 = g2.a1 * g1.a2 + g2.a2 * g1.b2;
    r.a3 = g2.a1 * g1.a3 + g2.a2 * g1.b3 + g2.a3;
    r.b1 = g2.b1 * g1.a1 + g2.b2 * g1.b1;
    r.b2 = g2.b1 * g1.a2 + g2.b2 * g1.b2;
    r.b3 = g2.b1 * g1.a3 + g2.b2 * g1.b3 + g2.b3;
    return r;
}

EquationFamily apply_equivalence(const EquivGroupElement& g, const EquationFamily& fam) {
    if (is_degenerate(g)) throw EvalError("degenerate equivalence-group element");
    if (fam.family != Family::Filtration)
        throw EvalError("equivalence group acts on the filtration class");
    Expr p = Expr::var(kArg);
    Expr vx = (Expr::num(g.a1) * p - Expr::num(g.b1)) / (Expr::num(g.b2) - Expr::num(g.a2) * p);
    Expr ft = Expr::num(Rat(1) / g.e1) * Expr::pow(Expr::num(g.a1) + Expr::num(g.a2) * vx, 2) *
              substitute(fam.f, {{kArg, vx}});
    return {Family::Filtration, ft};
}

}  // namespace fastdiff
