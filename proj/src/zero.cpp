#include "zero.hpp"

#include <cmath>
#include <random>

#include "poly.hpp"

namespace fastdiff {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ProvedZero: return "proved-zero";
        case Verdict::ProvedNonzero: return "proved-nonzero";
        case Verdict::NumericallyZero: return "numerically-zero";
        case Verdict::NumericallyNonzero: return "numerically-nonzero";
    }
    return "?";
}

namespace {

struct TermSplit {
    CRat coeff;
    Expr rest;  // one() when the term is constant
};

TermSplit split_coeff(const Expr& term) {
    const Node& n = term.node();
    if (n.kind == Kind::Number) return {n.value, Expr::num(1)};
    if (n.kind == Kind::Product && n.kids[0].is_number()) {
        std::vector<Expr> rest(n.kids.begin() + 1, n.kids.end());
        return {n.kids[0].value(), Expr::product(std::move(rest))};
    }
    return {CRat(1), term};
}

// exp(z) with the argument split termwise so that integer multiples of a
// shared kernel land on the same base
Expr exp_split(const Expr& z) {
    std::vector<Expr> terms;
    if (z.kind() == Kind::Sum)
        terms = z.node().kids;
    else
        terms = {z};

    std::vector<Expr> factors;
    for (const Expr& t : terms) {
        TermSplit s = split_coeff(t);
        const Rat& a = s.coeff.re();
        const Rat& b = s.coeff.im();
        bool is_const = s.rest.is_one_literal();
        bool is_pi = s.rest.kind() == Kind::Pi;
        if (is_pi && !b.is_zero() && (b.den() == 1 || b.den() == 2)) {
            // exp(i*pi*p/q) for q in {1,2} is a power of i
            long long k = 2 * b.num() / b.den();
            CRat v = CRat::i().pow(((k % 4) + 4) % 4);
            if (!v.is_one()) factors.push_back(Expr::num(v));
            if (!a.is_zero())
                factors.push_back(Expr::pow(
                    Expr::apply(FuncTag::Exp, Expr::num(Rat(1, a.den())) * Expr::pi()), a.num()));
            continue;
        }
        Expr kernel = is_const ? Expr::num(1) : (is_pi ? Expr::pi() : s.rest);
        if (!a.is_zero()) {
            Expr base = Expr::apply(FuncTag::Exp, Expr::num(Rat(1, a.den())) * kernel);
            factors.push_back(Expr::pow(base, a.num()));
        }
        if (!b.is_zero()) {
            Expr base = Expr::apply(FuncTag::Exp, Expr::num(CRat(Rat(0), Rat(1, b.den()))) * kernel);
            factors.push_back(Expr::pow(base, b.num()));
        }
    }
    return Expr::product(std::move(factors));
}

bool contains_func(const Expr& e, FuncTag a, FuncTag b) {
    const Node& n = e.node();
    if (n.kind == Kind::Func && (n.func == a || n.func == b)) return true;
    for (const Expr& k : n.kids)
        if (contains_func(k, a, b)) return true;
    return false;
}

}  // namespace

Expr trig_to_exp(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Pi:
        case Kind::Var:
        case Kind::Jet:
        case Kind::FuncSym:
            return e;
        case Kind::Sum:
        case Kind::Product:
        case Kind::Power: {
            std::vector<Expr> kids;
            kids.reserve(n.kids.size());
            for (const Expr& k : n.kids) kids.push_back(trig_to_exp(k));
            if (n.kind == Kind::Sum) return Expr::sum(std::move(kids));
            if (n.kind == Kind::Product) return Expr::product(std::move(kids));
            return Expr::pow(kids[0], kids[1]);
        }
        case Kind::Opaque:
            return Expr::opaque(n.name, n.order, trig_to_exp(n.kids[0]));
        case Kind::Func: {
            Expr arg = trig_to_exp(n.kids[0]);
            Expr i = Expr::imag();
            Expr two = Expr::num(2);
            switch (n.func) {
                case FuncTag::Exp:
                    return exp_split(arg);
                case FuncTag::Sin: {
                    Expr E = exp_split(i * arg), F = exp_split(-(i * arg));
                    return (E - F) / (two * i);
                }
                case FuncTag::Cos: {
                    Expr E = exp_split(i * arg), F = exp_split(-(i * arg));
                    return (E + F) / two;
                }
                case FuncTag::Tan: {
                    Expr E = exp_split(i * arg), F = exp_split(-(i * arg));
                    return -(i * (E - F)) / (E + F);
                }
                case FuncTag::Cot: {
                    Expr E = exp_split(i * arg), F = exp_split(-(i * arg));
                    return i * (E + F) / (E - F);
                }
                case FuncTag::Sinh: {
                    Expr E = exp_split(arg), F = exp_split(-arg);
                    return (E - F) / two;
                }
                case FuncTag::Cosh: {
                    Expr E = exp_split(arg), F = exp_split(-arg);
                    return (E + F) / two;
                }
                case FuncTag::Tanh: {
                    Expr E = exp_split(arg), F = exp_split(-arg);
                    return (E - F) / (E + F);
                }
                case FuncTag::Coth: {
                    Expr E = exp_split(arg), F = exp_split(-arg);
                    return (E + F) / (E - F);
                }
                default:
                    return Expr::apply(n.func, arg);
            }
        }
    }
    return e;
}

bool proved_zero(const Expr& e) {
    if (e.is_zero_literal()) return true;
    if (e.is_number()) return false;
    try {
        AtomTable at;
        if (to_rational(e, at).num.is_zero()) return true;
    } catch (const TooComplex&) {
    } catch (const OverflowError&) {
    }
    try {
        AtomTable at;
        if (to_rational(trig_to_exp(e), at).num.is_zero()) return true;
    } catch (const TooComplex&) {
    } catch (const OverflowError&) {
    }
    return false;
}

ZeroReport is_zero(const Expr& e, const ProbeOptions& opt) {
    if (e.is_zero_literal()) return {Verdict::ProvedZero, 0.0, 0};
    if (e.is_number()) return {Verdict::ProvedNonzero, std::abs(eval(e, {})), 0};

    try {
        AtomTable at;
        RationalForm rf = to_rational(e, at);
        if (rf.num.is_zero()) return {Verdict::ProvedZero, 0.0, 0};
        if (rf.num.is_constant()) return {Verdict::ProvedNonzero, 0.0, 0};
        AtomTable at2;
        RationalForm rf2 = to_rational(trig_to_exp(e), at2);
        if (rf2.num.is_zero()) return {Verdict::ProvedZero, 0.0, 0};
        if (rf2.num.is_constant()) return {Verdict::ProvedNonzero, 0.0, 0};
    } catch (const TooComplex&) {
    } catch (const OverflowError&) {
    }

    if (contains_kind(e, Kind::Opaque))
        throw EvalError("cannot probe an expression with unresolved opaque functions");

    std::map<std::string, Expr> syms;
    collect_symbols(e, syms);
    bool real_only = contains_func(e, FuncTag::LnAbs, FuncTag::Abs);

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> mag(0.4, 1.6);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> rmag(0.3, 2.0);

    EvalOptions ev;
    ev.pole_eps = opt.pole_eps;

    double max_abs = 0.0;
    int used = 0;
    int attempts = 0;
    const int max_attempts = opt.probes * 64;
    while (used < opt.probes && attempts < max_attempts) {
        ++attempts;
        Bindings b;
        for (const auto& [key, sym] : syms) {
            if (real_only) {
                double v = rmag(rng);
                if (rng() & 1) v = -v;
                b[key] = v;
            } else {
                double r = mag(rng), th = ang(rng);
                b[key] = std::complex<double>(r * std::cos(th), r * std::sin(th));
            }
        }
        double scale = 0.0;
        std::complex<double> v;
        try {
            v = eval_scaled(e, b, scale, ev);
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(scale)) continue;
        double m = std::abs(v) / std::max(1.0, scale);
        if (m > max_abs) max_abs = m;
        ++used;
    }
    if (used < opt.probes)
        throw EvalError("zero test: could not find enough admissible probe points");

    Verdict verdict = max_abs <= opt.tolerance ? Verdict::NumericallyZero : Verdict::NumericallyNonzero;
    return {verdict, max_abs, used};
}

}  // namespace fastdiff
