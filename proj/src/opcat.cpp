#include "opcat.hpp"

#include <array>
#include <sstream>

namespace fastdiff {

namespace {

Substitution coord_subs(const std::vector<std::string>& vars, const std::vector<Expr>& values) {
    Substitution s;
    for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = values[i];
    return s;
}

}  // namespace

PointTransformation compose(const PointTransformation& after, const PointTransformation& first) {
    if (after.vars != first.vars) throw EvalError("transformations act on different spaces");
    PointTransformation r;
    r.vars = first.vars;
    Substitution f = coord_subs(first.vars, first.fwd);
    Substitution b = coord_subs(first.vars, after.inv);
    for (size_t i = 0; i < first.vars.size(); ++i) {
        r.fwd.push_back(substitute(after.fwd[i], f));
        r.inv.push_back(substitute(first.inv[i], b));
    }
    return r;
}

Expr transformation_jacobian(const PointTransformation& g) {
    size_t n = g.vars.size();
    if (n != 3) throw EvalError("jacobian implemented for three coordinates");
    auto d = [&](size_t i, size_t j) { return differentiate(g.fwd[i], g.vars[j]); };
    return d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1)) -
           d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0)) +
           d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0));
}

std::vector<Expr> inverse_residuals(const PointTransformation& g) {
    Substitution b = coord_subs(g.vars, g.inv);
    std::vector<Expr> out;
    for (size_t i = 0; i < g.vars.size(); ++i)
        out.push_back(substitute(g.fwd[i], b) - Expr::var(g.vars[i]));
    return out;
}

ReductionOperator push_forward(const PointTransformation& g, const ReductionOperator& q) {
    const std::string& dep = g.vars[2];
    if (q.dep != dep) throw EvalError("operator and transformation use different dependent variables");
    Substitution b = coord_subs(g.vars, g.inv);
    auto apply_q = [&](const Expr& c) {
        Expr r = q.tau * differentiate(c, g.vars[0]) + q.xi * differentiate(c, g.vars[1]) +
                 q.eta * differentiate(c, dep);
        return substitute(r, b);
    };
    return {dep, apply_q(g.fwd[0]), apply_q(g.fwd[1]), apply_q(g.fwd[2])};
}

PointTransformation g1_transformation(const G1Element& g) {
    if (g.e3.is_zero() || g.e4.is_zero()) throw EvalError("degenerate G1 element");
    Expr t = Expr::var("t"), x = Expr::var("x"), u = Expr::var("u");
    auto c = [](const Rat& r) { return Expr::num(r); };
    return {{"t", "x", "u"},
            {(t - c(g.e1)) / c(g.e3), (x - c(g.e2)) / c(g.e4), c(g.e4 * g.e4 / g.e3) * u},
            {c(g.e3) * t + c(g.e1), c(g.e4) * x + c(g.e2), c(g.e3 / (g.e4 * g.e4)) * u}};
}

PointTransformation g2_transformation(const G2Element& g) {
    if (g.e3.is_zero() || g.e4.is_zero()) throw EvalError("degenerate G2 element");
    Expr t = Expr::var("t"), x = Expr::var("x"), v = Expr::var("v");
    auto c = [](const Rat& r) { return Expr::num(r); };
    PointTransformation affine{{"t", "x", "v"},
                               {c(g.e3) * t + c(g.e1), c(g.e4) * x + c(g.e2), c(g.e3 / g.e4) * v},
                               {(t - c(g.e1)) / c(g.e3), (x - c(g.e2)) / c(g.e4), c(g.e4 / g.e3) * v}};
    if (!g.hodograph) return affine;
    return compose(potential_hodograph(), affine);
}

PointTransformation potential_hodograph() {
    Expr t = Expr::var("t"), x = Expr::var("x"), v = Expr::var("v");
    return {{"t", "x", "v"}, {t, v, x}, {t, v, x}};
}

EquivalenceVerdict operators_equivalent(const ReductionOperator& a, const ReductionOperator& b,
                                        const ProbeOptions& opt) {
    if (a.dep != b.dep) return {false, 0.0};
    std::array<Expr, 3> ca = {a.tau, a.xi, a.eta};
    std::array<Expr, 3> cb = {b.tau, b.xi, b.eta};
    double max_abs = 0.0;
    for (int i = 0; i < 3; ++i) {
        bool za = ca[i].is_zero_literal() || verdict_zero(is_zero(ca[i], opt).verdict);
        bool zb = cb[i].is_zero_literal() || verdict_zero(is_zero(cb[i], opt).verdict);
        if (za != zb) return {false, max_abs};
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            Expr minor = ca[i] * cb[j] - ca[j] * cb[i];
            ZeroReport r = is_zero(minor, opt);
            max_abs = std::max(max_abs, r.max_abs);
            if (!verdict_zero(r.verdict)) return {false, max_abs};
        }
    }
    return {true, max_abs};
}

EquivalenceVerdict operators_equivalent_mod_group(const PointTransformation& g,
                                                  const ReductionOperator& a,
                                                  const ReductionOperator& b,
                                                  const ProbeOptions& opt) {
    return operators_equivalent(push_forward(g, a), b, opt);
}

ReductionOperator potential_to_nogo(const ReductionOperator& q_pot, const Expr& f_univariate) {
    if (q_pot.dep != "v") throw EvalError("potential operator must act on v");
    ReductionOperator q = q_pot.tau.is_one_literal() ? q_pot : normalize_operator(q_pot);
    if (!q.tau.is_one_literal()) throw EvalError("potential operator must have tau != 0");
    if (contains_symbol(q.xi, "v") || contains_symbol(q.eta, "v"))
        throw EvalError("potential operator coefficients must not depend on v");
    EquationFamily fam = make_family(Family::Diffusion, f_univariate);
    Expr fu = substitute(fam.f, {{"s", Expr::var("u")}});
    Expr eta = (-q.xi * Expr::var("u") + q.eta) / fu;
    return {"u", Expr::num(0), Expr::num(1), eta};
}

ReductionOperator gandarias_ansatz_operator(const Expr& eta1, const Expr& eta2,
                                            const Expr& f_univariate) {
    EquationFamily fam = make_family(Family::Diffusion, f_univariate);
    Expr fu = substitute(fam.f, {{"s", Expr::var("u")}});
    Expr eta = (eta1 * Expr::var("u") + eta2) / fu;
    return {"u", Expr::num(0), Expr::num(1), eta};
}

std::vector<ReductionOperator> lie_generators(Algebra a) {
    if (a == Algebra::A1)
        return {{"u", parse("1"), parse("0"), parse("0")},
                {"u", parse("0"), parse("1"), parse("0")},
                {"u", parse("t"), parse("0"), parse("u")},
                {"u", parse("0"), parse("x"), parse("-2*u")}};
    return {{"v", parse("1"), parse("0"), parse("0")},
            {"v", parse("0"), parse("1"), parse("0")},
            {"v", parse("0"), parse("0"), parse("1")},
            {"v", parse("t"), parse("0"), parse("v")},
            {"v", parse("0"), parse("x"), parse("-v")}};
}

namespace {

Expr f_profile(const std::string& name, const Expr& w) {
    if (name == "inv") return Expr::num(-2) / w;
    if (name == "cot") return Expr::num(-2) * Expr::apply(FuncTag::Cot, w);
    if (name == "tanh") return Expr::num(-2) * Expr::apply(FuncTag::Tanh, w);
    if (name == "coth") return Expr::num(-2) * Expr::apply(FuncTag::Coth, w);
    throw EvalError("unknown f selector '" + name + "'");
}

std::map<std::string, std::string> parse_selector(const std::string& s) {
    std::map<std::string, std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        size_t eq = tok.find('=');
        if (eq == std::string::npos) throw EvalError("invalid selector token '" + tok + "'");
        out[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return out;
}

Expr case5_chi(const std::string& sel) {
    if (sel == "tanh2t*tanhx") return parse("tanh(2*t)*tanh(x)");
    if (sel == "tanh2t*cothx") return parse("tanh(2*t)*coth(x)");
    if (sel == "coth2t*cothx") return parse("coth(2*t)*coth(x)");
    if (sel == "exp1") return parse("(exp(2*x)*tanh(2*t)+1)/(exp(2*x)-tanh(2*t))");
    if (sel == "exp2") return parse("(2-exp(2*x)-exp(4*t))/(2+exp(2*x)+exp(4*t))");
    throw EvalError("unknown chi selector '" + sel + "'");
}

}  // namespace

ReductionOperator theorem1_operator(int case_index, const std::string& selector) {
    auto params = parse_selector(selector);
    Expr t = Expr::var("t"), x = Expr::var("x"), v = Expr::var("v");
    switch (case_index) {
        case 1: {
            if (params.at("eps") != "0" && params.at("eps") != "1")
                throw EvalError("case 1 requires eps in {0,1}");
            long long eps = params.at("eps") == "1" ? 1 : 0;
            Expr w = x + Expr::num(eps) * t;
            return {"v", Expr::num(1), Expr::num(eps), f_profile(params.at("f"), w)};
        }
        case 2: {
            Expr f = f_profile(params.at("f"), x + v);
            return {"v", Expr::num(1), f, f};
        }
        case 3: {
            const std::string& phi_sel = params.at("phi");
            Expr phi;
            if (phi_sel == "t+expx")
                phi = t + Expr::apply(FuncTag::Exp, x);
            else if (phi_sel == "t*f")
                phi = t * f_profile(params.at("f"), x);
            else
                throw EvalError("unknown phi selector '" + phi_sel + "'");
            Expr xi = Expr::num(-2) / (v + phi);
            Expr eta = differentiate(phi, "t") + differentiate(phi, "x") * xi;
            return {"v", Expr::num(1), xi, eta};
        }
        case 4: {
            const std::string& sel = params.at("chi");
            Expr chi;
            if (sel == "tan2t*tanhx")
                chi = parse("tan(2*t)*tanh(x)");
            else if (sel == "coth2t*cotx")
                chi = parse("coth(2*t)*cot(x)");
            else
                throw EvalError("unknown chi selector '" + sel + "'");
            Expr tv = Expr::apply(FuncTag::Tan, v);
            Expr xi = Expr::num(-2) * (Expr::num(1) + chi * tv) / (tv - chi);
            Expr eta = -(differentiate(chi, "t") + differentiate(chi, "x") * xi) /
                       (Expr::num(1) + chi * chi);
            return {"v", Expr::num(1), xi, eta};
        }
        case 5: {
            Expr chi = case5_chi(params.at("chi"));
            Expr th = Expr::apply(FuncTag::Tanh, v);
            Expr xi = Expr::num(-2) * (Expr::num(1) - chi * th) / (th - chi);
            Expr eta = -(differentiate(chi, "t") + differentiate(chi, "x") * xi) /
                       (Expr::num(1) - chi * chi);
            return {"v", Expr::num(1), xi, eta};
        }
        default:
            throw EvalError("case index must be 1..5");
    }
}

namespace {

std::vector<CatalogOperator> build_catalog() {
    std::vector<CatalogOperator> cat;
    EvolutionEquation fd = make_equation(Family::Diffusion, parse("1/u"));
    EvolutionEquation pot = make_equation(Family::Filtration, parse("1/v_x"));

    auto a1 = lie_generators(Algebra::A1);
    for (size_t i = 0; i < a1.size(); ++i)
        cat.push_back({"lie.A1." + std::to_string(i + 1), fd, a1[i]});
    auto a2 = lie_generators(Algebra::A2);
    for (size_t i = 0; i < a2.size(); ++i)
        cat.push_back({"lie.A2." + std::to_string(i + 1), pot, a2[i]});

    for (const char* eps : {"0", "1"})
        for (const char* f : {"inv", "cot", "tanh", "coth"}) {
            std::string sel = std::string("eps=") + eps + ".f=" + f;
            cat.push_back({"thm1.case1." + sel, pot, theorem1_operator(1, sel)});
        }
    for (const char* f : {"inv", "cot", "tanh", "coth"}) {
        std::string sel = std::string("f=") + f;
        cat.push_back({"thm1.case2." + sel, pot, theorem1_operator(2, sel)});
    }
    cat.push_back({"thm1.case3.phi=t+expx", pot, theorem1_operator(3, "phi=t+expx")});
    for (const char* f : {"inv", "cot", "tanh", "coth"}) {
        std::string sel = std::string("phi=t*f.f=") + f;
        cat.push_back({"thm1.case3." + sel, pot, theorem1_operator(3, sel)});
    }
    for (const char* chi : {"tan2t*tanhx", "coth2t*cotx"}) {
        std::string sel = std::string("chi=") + chi;
        cat.push_back({"thm1.case4." + sel, pot, theorem1_operator(4, sel)});
    }
    for (const char* chi : {"tanh2t*tanhx", "tanh2t*cothx", "coth2t*cothx", "exp1", "exp2"}) {
        std::string sel = std::string("chi=") + chi;
        cat.push_back({"thm1.case5." + sel, pot, theorem1_operator(5, sel)});
    }

    for (const char* f : {"cot", "coth", "tanh"}) {
        // d_t - d_x - 2 g(x-t) d_v
        ReductionOperator q{"v", Expr::num(1), Expr::num(-1), f_profile(f, parse("x-t"))};
        cat.push_back({std::string("pot.") + f, pot, q});
    }

    for (const char* f : {"cot", "coth", "tanh"}) {
        Expr eta2 = f_profile(f, parse("x-t"));  // -2*f(x-t)
        cat.push_back({std::string("gandarias.") + f, fd,
                       gandarias_ansatz_operator(Expr::num(1), eta2, parse("1/u"))});
    }
    cat.push_back({"gandarias.complex1", fd,
                   {"u", Expr::num(0), Expr::num(1),
                    parse("I*u^2 - 2*coth(x-I*t)*u")}});
    cat.push_back({"gandarias.complex2", fd,
                   {"u", Expr::num(0), Expr::num(1),
                    parse("-(I*u^2 - 2*I*coth(t-I*x)*u)")}});
    return cat;
}

}  // namespace

const std::vector<CatalogOperator>& operator_catalog() {
    static const std::vector<CatalogOperator> cat = build_catalog();
    return cat;
}

const CatalogOperator* find_operator(const std::string& key) {
    for (const CatalogOperator& c : operator_catalog())
        if (c.key == key) return &c;
    return nullptr;
}

}  // namespace fastdiff
