#include "expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <sstream>

namespace fastdiff {

namespace {

NodePtr make_node(Node&& n) { return std::make_shared<const Node>(std::move(n)); }

const Expr& zero_expr() {
    static const Expr z = Expr::num(0);
    return z;
}
const Expr& one_expr() {
    static const Expr o = Expr::num(1);
    return o;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

int cmp_rat(const Rat& a, const Rat& b) {
    if (a == b) return 0;
    return a < b ? -1 : 1;
}
int cmp_crat(const CRat& a, const CRat& b) {
    int c = cmp_rat(a.re(), b.re());
    if (c) return c;
    return cmp_rat(a.im(), b.im());
}

}  // namespace

Expr::Expr() : p_(zero_expr().ptr()) {}

Expr Expr::num(long long n) {
    Node nd;
    nd.kind = Kind::Number;
    nd.value = CRat(n);
    return Expr(make_node(std::move(nd)));
}
Expr Expr::num(const Rat& r) { return num(CRat(r)); }
Expr Expr::num(const CRat& c) {
    Node nd;
    nd.kind = Kind::Number;
    nd.value = c;
    return Expr(make_node(std::move(nd)));
}
Expr Expr::imag() { return num(CRat::i()); }
Expr Expr::pi() {
    Node nd;
    nd.kind = Kind::Pi;
    return Expr(make_node(std::move(nd)));
}
Expr Expr::var(const std::string& name) {
    Node nd;
    nd.kind = Kind::Var;
    nd.name = name;
    return Expr(make_node(std::move(nd)));
}
Expr Expr::jet(const std::string& dep, int dt, int dx) {
    if (dt + dx <= 0 || dt < 0 || dx < 0) throw std::runtime_error("bad jet order");
    Node nd;
    nd.kind = Kind::Jet;
    nd.name = dep;
    nd.jt = dt;
    nd.jx = dx;
    return Expr(make_node(std::move(nd)));
}
Expr Expr::funcsym(const std::string& name, std::vector<std::string> args, std::vector<int> derivs) {
    Node nd;
    nd.kind = Kind::FuncSym;
    nd.name = name;
    if (derivs.empty()) derivs.assign(args.size(), 0);
    if (derivs.size() != args.size()) throw std::runtime_error("funcsym deriv arity mismatch");
    nd.args = std::move(args);
    nd.derivs = std::move(derivs);
    return Expr(make_node(std::move(nd)));
}
Expr Expr::apply(FuncTag f, const Expr& arg) {
    // light constant folding only
    if (arg.is_number() && arg.value().is_zero()) {
        switch (f) {
            case FuncTag::Exp:
            case FuncTag::Cos:
            case FuncTag::Cosh:
                return num(1);
            case FuncTag::Sin:
            case FuncTag::Tan:
            case FuncTag::Sinh:
            case FuncTag::Tanh:
            case FuncTag::Arctan:
            case FuncTag::Abs:
                return num(0);
            default:
                break;  // poles (cot, coth, lnabs) stay symbolic
        }
    }
    if (f == FuncTag::LnAbs && arg.is_one_literal()) return num(0);
    Node nd;
    nd.kind = Kind::Func;
    nd.func = f;
    nd.kids = {arg};
    return Expr(make_node(std::move(nd)));
}
Expr Expr::opaque(const std::string& name, int order, const Expr& arg) {
    Node nd;
    nd.kind = Kind::Opaque;
    nd.name = name;
    nd.order = order;
    nd.kids = {arg};
    return Expr(make_node(std::move(nd)));
}

int Expr::compare(const Expr& a, const Expr& b) {
    if (a.p_ == b.p_) return 0;
    const Node& x = *a.p_;
    const Node& y = *b.p_;
    if (x.kind != y.kind) return kind_rank(x.kind) < kind_rank(y.kind) ? -1 : 1;
    switch (x.kind) {
        case Kind::Number:
            return cmp_crat(x.value, y.value);
        case Kind::Pi:
            return 0;
        case Kind::Var:
            return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
        case Kind::Jet: {
            int c = x.name.compare(y.name);
            if (c) return c < 0 ? -1 : 1;
            if (x.jt != y.jt) return x.jt < y.jt ? -1 : 1;
            if (x.jx != y.jx) return x.jx < y.jx ? -1 : 1;
            return 0;
        }
        case Kind::FuncSym: {
            int c = x.name.compare(y.name);
            if (c) return c < 0 ? -1 : 1;
            if (x.args != y.args) return x.args < y.args ? -1 : 1;
            if (x.derivs != y.derivs) return x.derivs < y.derivs ? -1 : 1;
            return 0;
        }
        case Kind::Func:
            if (x.func != y.func) return static_cast<int>(x.func) < static_cast<int>(y.func) ? -1 : 1;
            return compare(x.kids[0], y.kids[0]);
        case Kind::Opaque: {
            int c = x.name.compare(y.name);
            if (c) return c < 0 ? -1 : 1;
            if (x.order != y.order) return x.order < y.order ? -1 : 1;
            return compare(x.kids[0], y.kids[0]);
        }
        case Kind::Sum:
        case Kind::Product:
        case Kind::Power: {
            size_t n = std::min(x.kids.size(), y.kids.size());
            for (size_t i = 0; i < n; ++i) {
                int c = compare(x.kids[i], y.kids[i]);
                if (c) return c;
            }
            if (x.kids.size() != y.kids.size()) return x.kids.size() < y.kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

namespace {

// (coefficient, monomial-part) decomposition of a canonical term
std::pair<CRat, Expr> split_term(const Expr& e) {
    if (e.is_number()) return {e.value(), one_expr()};
    if (e.kind() == Kind::Product) {
        const auto& kids = e.node().kids;
        if (!kids.empty() && kids[0].is_number()) {
            std::vector<Expr> rest(kids.begin() + 1, kids.end());
            if (rest.size() == 1) return {kids[0].value(), rest[0]};
            Node nd;
            nd.kind = Kind::Product;
            nd.kids = std::move(rest);
            return {kids[0].value(), Expr(make_node(std::move(nd)))};
        }
    }
    return {CRat(1), e};
}

// (base, exponent) of a canonical factor
std::pair<Expr, Expr> split_factor(const Expr& e) {
    if (e.kind() == Kind::Power) return {e.node().kids[0], e.node().kids[1]};
    return {e, one_expr()};
}

bool is_integer_number(const Expr& e, long long& out) {
    if (!e.is_number()) return false;
    const CRat& v = e.value();
    if (!v.is_real() || !v.re().is_integer()) return false;
    out = v.re().num();
    return true;
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
    std::map<Expr, CRat, ExprLess> acc;
    std::vector<Expr> queue = std::move(terms);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const Expr& t = queue[qi];
        if (t.kind() == Kind::Sum) {
            for (const auto& k : t.node().kids) queue.push_back(k);
            continue;
        }
        auto [c, rest] = split_term(t);
        if (c.is_zero()) continue;
        auto it = acc.find(rest);
        if (it == acc.end())
            acc.emplace(rest, c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) acc.erase(it);
        }
    }
    std::vector<Expr> out;
    out.reserve(acc.size());
    for (const auto& [rest, c] : acc) {
        if (rest.is_one_literal())
            out.push_back(num(c));
        else if (c.is_one())
            out.push_back(rest);
        else
            out.push_back(product({num(c), rest}));
    }
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out[0];
    std::sort(out.begin(), out.end(), ExprLess{});
    Node nd;
    nd.kind = Kind::Sum;
    nd.kids = std::move(out);
    return Expr(make_node(std::move(nd)));
}

Expr Expr::product(std::vector<Expr> factors) {
    CRat coeff(1);
    std::map<Expr, std::vector<Expr>, ExprLess> powers;  // base -> exponent terms
    std::vector<Expr> queue = std::move(factors);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        const Expr& f = queue[qi];
        if (f.kind() == Kind::Product) {
            for (const auto& k : f.node().kids) queue.push_back(k);
            continue;
        }
        if (f.is_number()) {
            if (f.value().is_zero()) return zero_expr();
            coeff = coeff * f.value();
            continue;
        }
        auto [base, exp] = split_factor(f);
        powers[base].push_back(exp);
    }
    std::vector<Expr> out;
    bool irregular = false;
    for (auto& [base, exps] : powers) {
        Expr e = sum(std::move(exps));
        Expr f = pow(base, e);
        if (f.is_one_literal()) continue;
        if (f.is_number()) {
            coeff = coeff * f.value();
            continue;
        }
        if (f.kind() == Kind::Product) irregular = true;
        out.push_back(f);
    }
    if (coeff.is_zero()) return zero_expr();
    if (irregular) {
        out.push_back(num(coeff));
        return product(std::move(out));
    }
    if (out.empty()) return num(coeff);
    if (!coeff.is_one() && out.size() == 1 && out[0].kind() == Kind::Sum) {
        // distribute the constant so that c*(a+b) and c*a+c*b normalize alike
        std::vector<Expr> ts;
        for (const auto& k : out[0].node().kids) ts.push_back(product({num(coeff), k}));
        return sum(std::move(ts));
    }
    std::sort(out.begin(), out.end(), ExprLess{});
    if (!coeff.is_one()) out.insert(out.begin(), num(coeff));
    if (out.size() == 1) return out[0];
    Node nd;
    nd.kind = Kind::Product;
    nd.kids = std::move(out);
    return Expr(make_node(std::move(nd)));
}

Expr Expr::pow(const Expr& base, long long exponent) { return pow(base, num(exponent)); }

Expr Expr::pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_one_literal()) return base;
    if (exponent.is_zero_literal()) return one_expr();
    if (base.is_one_literal()) return one_expr();
    long long n;
    if (is_integer_number(exponent, n)) {
        if (base.is_number()) {
            if (base.value().is_zero()) {
                if (n > 0) return zero_expr();
                throw EvalError("0 raised to a non-positive power");
            }
            if (n > -128 && n < 128) {
                try {
                    return num(base.value().pow(n));
                } catch (const OverflowError&) { /* keep symbolic */
                }
            }
        }
        if (base.kind() == Kind::Power)
            return pow(base.node().kids[0], product({base.node().kids[1], num(n)}));
        if (base.kind() == Kind::Product) {
            std::vector<Expr> fs;
            for (const auto& k : base.node().kids) fs.push_back(pow(k, n));
            return product(std::move(fs));
        }
    }
    Node nd;
    nd.kind = Kind::Power;
    nd.kids = {base, exponent};
    return Expr(make_node(std::move(nd)));
}

std::string symbol_key(const Node& n) {
    switch (n.kind) {
        case Kind::Var:
            return n.name;
        case Kind::Jet:
            return n.name + "_" + std::string(n.jt, 't') + std::string(n.jx, 'x');
        case Kind::FuncSym: {
            std::string s = n.name;
            std::string suffix;
            for (size_t i = 0; i < n.args.size(); ++i)
                for (int k = 0; k < n.derivs[i]; ++k) suffix += n.args[i];
            if (!suffix.empty()) s += "_" + suffix;
            return s;
        }
        default:
            throw std::runtime_error("symbol_key: not a symbol");
    }
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = e + parse_term();
            else if (eat('-'))
                e = e - parse_term();
            else
                return e;
        }
    }
    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = e * parse_unary();
            else if (eat('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }
    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        return parse_power();
    }
    Expr parse_power() {
        Expr b = parse_primary();
        if (eat('^')) return Expr::pow(b, parse_unary());
        return b;
    }
    Expr parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c)) return parse_number();
        if (std::isalpha((unsigned char)c)) return parse_ident();
        fail("unexpected character");
    }
    Expr parse_number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        long long v = 0;
        try {
            v = std::stoll(s.substr(start, pos - start));
        } catch (...) {
            pos = start;
            fail("integer literal out of range");
        }
        return Expr::num(v);
    }
    static bool known_function(const std::string& id, FuncTag& tag) {
        static const std::map<std::string, FuncTag> table = {
            {"exp", FuncTag::Exp},   {"lnabs", FuncTag::LnAbs}, {"sin", FuncTag::Sin},
            {"cos", FuncTag::Cos},   {"tan", FuncTag::Tan},     {"cot", FuncTag::Cot},
            {"sinh", FuncTag::Sinh}, {"cosh", FuncTag::Cosh},   {"tanh", FuncTag::Tanh},
            {"coth", FuncTag::Coth}, {"arctan", FuncTag::Arctan}, {"abs", FuncTag::Abs}};
        auto it = table.find(id);
        if (it == table.end()) return false;
        tag = it->second;
        return true;
    }
    Expr parse_ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && std::isalnum((unsigned char)s[pos])) ++pos;
        std::string id = s.substr(start, pos - start);
        if (pos < s.size() && s[pos] == '_') {
            size_t upos = pos++;
            size_t sstart = pos;
            while (pos < s.size() && (s[pos] == 't' || s[pos] == 'x')) ++pos;
            if (pos == sstart || (pos < s.size() && std::isalnum((unsigned char)s[pos]))) {
                pos = upos;
                fail("invalid jet-variable suffix");
            }
            int jt = 0, jx = 0;
            for (size_t i = sstart; i < pos; ++i) (s[i] == 't' ? jt : jx)++;
            return Expr::jet(id, jt, jx);
        }
        if (id == "I") return Expr::imag();
        if (id == "pi") return Expr::pi();
        FuncTag tag;
        if (peek() == '(') {
            if (!known_function(id, tag)) {
                pos = start;
                fail("unknown function '" + id + "'");
            }
            ++pos;  // '('
            Expr arg = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return Expr::apply(tag, arg);
        }
        if (known_function(id, tag)) fail("function '" + id + "' requires parentheses");
        return Expr::var(id);
    }
};

}  // namespace

Expr parse(const std::string& text) {
    Parser p(text);
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return e;
}

// ---------------------------------------------------------------------------
// printer

const char* func_name(FuncTag f) {
    switch (f) {
        case FuncTag::Exp: return "exp";
        case FuncTag::LnAbs: return "lnabs";
        case FuncTag::Sin: return "sin";
        case FuncTag::Cos: return "cos";
        case FuncTag::Tan: return "tan";
        case FuncTag::Cot: return "cot";
        case FuncTag::Sinh: return "sinh";
        case FuncTag::Cosh: return "cosh";
        case FuncTag::Tanh: return "tanh";
        case FuncTag::Coth: return "coth";
        case FuncTag::Arctan: return "arctan";
        case FuncTag::Abs: return "abs";
    }
    return "?";
}

namespace {

// precedence: 0 sum, 1 product, 2 unary-, 3 power, 4 atom
void print(std::ostream& os, const Expr& e, int parent_prec);

void print_number(std::ostream& os, const CRat& v, int parent_prec) {
    bool re0 = v.re().is_zero(), im0 = v.im().is_zero();
    if (im0) {
        const Rat& r = v.re();
        int prec = r.num() < 0 ? 2 : (r.is_integer() ? 4 : 1);
        if (prec < parent_prec) os << "(";
        os << r.str();
        if (prec < parent_prec) os << ")";
        return;
    }
    if (re0) {
        if (v.im().is_one()) {
            os << "I";
            return;
        }
        int prec = v.im().num() < 0 ? 2 : 1;
        if (prec <= parent_prec && parent_prec >= 1) os << "(";
        os << v.im().str() << "*I";
        if (prec <= parent_prec && parent_prec >= 1) os << ")";
        return;
    }
    os << "(" << v.re().str();
    if (v.im().num() > 0) os << "+";
    os << v.im().str() << "*I)";
}

void print(std::ostream& os, const Expr& e, int parent_prec) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            print_number(os, n.value, parent_prec);
            return;
        case Kind::Pi:
            os << "pi";
            return;
        case Kind::Var:
            os << n.name;
            return;
        case Kind::Jet:
        case Kind::FuncSym:
            os << symbol_key(n);
            return;
        case Kind::Func:
            os << func_name(n.func) << "(";
            print(os, n.kids[0], 0);
            os << ")";
            return;
        case Kind::Opaque:
            os << n.name << std::string(n.order, '\'') << "(";
            print(os, n.kids[0], 0);
            os << ")";
            return;
        case Kind::Sum: {
            if (parent_prec > 0) os << "(";
            bool first = true;
            for (const auto& t : n.kids) {
                auto [c, rest] = split_term(t);
                bool neg = c.im().is_zero() && c.re().num() < 0;
                if (!first) os << (neg ? " - " : " + ");
                else if (neg) os << "-";
                first = false;
                CRat cc = neg ? -c : c;
                if (rest.is_one_literal())
                    print_number(os, cc, 1);
                else if (cc.is_one())
                    print(os, rest, 1);
                else {
                    print_number(os, cc, 1);
                    os << "*";
                    print(os, rest, 1);
                }
            }
            if (parent_prec > 0) os << ")";
            return;
        }
        case Kind::Product: {
            if (parent_prec > 1) os << "(";
            bool first = true;
            for (const auto& f : n.kids) {
                if (!first) os << "*";
                first = false;
                print(os, f, 2);
            }
            if (parent_prec > 1) os << ")";
            return;
        }
        case Kind::Power: {
            if (parent_prec > 3) os << "(";
            print(os, n.kids[0], 4);
            os << "^";
            long long k;
            if (is_integer_number(n.kids[1], k))
                os << k;
            else {
                os << "(";
                print(os, n.kids[1], 0);
                os << ")";
            }
            if (parent_prec > 3) os << ")";
            return;
        }
    }
}

}  // namespace

std::string format(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

// ---------------------------------------------------------------------------
// differentiation

namespace {

Expr d_func(FuncTag f, const Expr& w) {
    using E = Expr;
    switch (f) {
        case FuncTag::Exp: return E::apply(FuncTag::Exp, w);
        case FuncTag::LnAbs: return E::pow(w, -1);
        case FuncTag::Sin: return E::apply(FuncTag::Cos, w);
        case FuncTag::Cos: return -E::apply(FuncTag::Sin, w);
        case FuncTag::Tan: return E::num(1) + E::pow(E::apply(FuncTag::Tan, w), 2);
        case FuncTag::Cot: return E::num(-1) - E::pow(E::apply(FuncTag::Cot, w), 2);
        case FuncTag::Sinh: return E::apply(FuncTag::Cosh, w);
        case FuncTag::Cosh: return E::apply(FuncTag::Sinh, w);
        case FuncTag::Tanh: return E::num(1) - E::pow(E::apply(FuncTag::Tanh, w), 2);
        case FuncTag::Coth: return E::num(1) - E::pow(E::apply(FuncTag::Coth, w), 2);
        case FuncTag::Arctan: return E::pow(E::num(1) + E::pow(w, 2), -1);
        case FuncTag::Abs: return w * E::pow(E::apply(FuncTag::Abs, w), -1);
    }
    throw std::runtime_error("unreachable");
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Pi:
            return Expr::num(0);
        case Kind::Var:
        case Kind::Jet:
            return symbol_key(n) == var ? Expr::num(1) : Expr::num(0);
        case Kind::FuncSym: {
            for (size_t i = 0; i < n.args.size(); ++i)
                if (n.args[i] == var) {
                    auto d = n.derivs;
                    d[i]++;
                    return Expr::funcsym(n.name, n.args, d);
                }
            return Expr::num(0);
        }
        case Kind::Func:
            return d_func(n.func, n.kids[0]) * differentiate(n.kids[0], var);
        case Kind::Opaque:
            return Expr::opaque(n.name, n.order + 1, n.kids[0]) * differentiate(n.kids[0], var);
        case Kind::Sum: {
            std::vector<Expr> ts;
            for (const auto& k : n.kids) ts.push_back(differentiate(k, var));
            return Expr::sum(std::move(ts));
        }
        case Kind::Product: {
            std::vector<Expr> ts;
            for (size_t i = 0; i < n.kids.size(); ++i) {
                std::vector<Expr> fs = n.kids;
                fs[i] = differentiate(n.kids[i], var);
                ts.push_back(Expr::product(std::move(fs)));
            }
            return Expr::sum(std::move(ts));
        }
        case Kind::Power: {
            const Expr& b = n.kids[0];
            const Expr& p = n.kids[1];
            Expr db = differentiate(b, var);
            if (p.is_number())
                return p * Expr::pow(b, p - Expr::num(1)) * db;
            Expr dp = differentiate(p, var);
            return e * (dp * Expr::apply(FuncTag::LnAbs, b) + p * db / b);
        }
    }
    throw std::runtime_error("unreachable");
}

// ---------------------------------------------------------------------------
// substitution

namespace {

template <typename Fn>
Expr rebuild(const Expr& e, Fn&& leaf) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
        case Kind::Pi:
        case Kind::Var:
        case Kind::Jet:
        case Kind::FuncSym:
            return leaf(e);
        case Kind::Func:
            return Expr::apply(n.func, rebuild(n.kids[0], leaf));
        case Kind::Opaque: {
            Expr arg = rebuild(n.kids[0], leaf);
            Expr node = Expr::opaque(n.name, n.order, arg);
            return leaf(node);
        }
        case Kind::Sum: {
            std::vector<Expr> ks;
            for (const auto& k : n.kids) ks.push_back(rebuild(k, leaf));
            return Expr::sum(std::move(ks));
        }
        case Kind::Product: {
            std::vector<Expr> ks;
            for (const auto& k : n.kids) ks.push_back(rebuild(k, leaf));
            return Expr::product(std::move(ks));
        }
        case Kind::Power:
            return Expr::pow(rebuild(n.kids[0], leaf), rebuild(n.kids[1], leaf));
    }
    throw std::runtime_error("unreachable");
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& subs) {
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::Var || n.kind == Kind::Jet) {
            auto it = subs.find(symbol_key(n));
            if (it != subs.end()) return it->second;
        }
        return leaf;
    });
}

Expr substitute_funcsym(const Expr& e, const std::string& name, const std::string& new_name, const CRat& scale) {
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::FuncSym && n.name == name)
            return Expr::num(scale) * Expr::funcsym(new_name, n.args, n.derivs);
        return leaf;
    });
}

Expr substitute_funcsym_values(const Expr& e, const std::string& name, const Expr& value) {
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::FuncSym && n.name == name) {
            Expr v = value;
            for (size_t i = 0; i < n.args.size(); ++i)
                for (int k = 0; k < n.derivs[i]; ++k) v = differentiate(v, n.args[i]);
            return v;
        }
        return leaf;
    });
}

Expr drop_funcsym_derivatives(const Expr& e, const std::string& name, const std::string& arg) {
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::FuncSym && n.name == name)
            for (size_t i = 0; i < n.args.size(); ++i)
                if (n.args[i] == arg && n.derivs[i] > 0) return Expr::num(0);
        return leaf;
    });
}

Expr substitute_opaque(const Expr& e, const std::string& name, const Expr& profile, const std::string& w) {
    std::vector<Expr> derivs = {profile};
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::Opaque && n.name == name) {
            while ((int)derivs.size() <= n.order) derivs.push_back(differentiate(derivs.back(), w));
            return substitute(derivs[n.order], {{w, n.kids[0]}});
        }
        return leaf;
    });
}

Expr apply_opaque_ode_rule(const Expr& e, const std::string& name, const Expr& rule, const std::string& ph) {
    // R_1 = rule(phi); R_{k+1} = R_k'(phi) * rule(phi)
    std::vector<Expr> rules = {Expr::var(ph), rule};
    return rebuild(e, [&](const Expr& leaf) {
        const Node& n = leaf.node();
        if (n.kind == Kind::Opaque && n.name == name && n.order >= 1) {
            while ((int)rules.size() <= n.order)
                rules.push_back(differentiate(rules.back(), ph) * rule);
            return substitute(rules[n.order], {{ph, Expr::opaque(name, 0, n.kids[0])}});
        }
        return leaf;
    });
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

using Cd = std::complex<double>;

Cd eval_rec(const Expr& e, const Bindings& b, const EvalOptions& opt);

Cd eval_func(FuncTag f, Cd z, const EvalOptions& opt) {
    switch (f) {
        case FuncTag::Exp:
            return std::exp(z);
        case FuncTag::LnAbs:
            if (std::abs(z) < opt.pole_eps) throw PoleError("lnabs at zero");
            return std::log(std::abs(z));
        case FuncTag::Sin:
            return std::sin(z);
        case FuncTag::Cos:
            return std::cos(z);
        case FuncTag::Tan: {
            Cd c = std::cos(z);
            if (std::abs(c) < opt.pole_eps) throw PoleError("tan pole");
            return std::sin(z) / c;
        }
        case FuncTag::Cot: {
            Cd s = std::sin(z);
            if (std::abs(s) < opt.pole_eps) throw PoleError("cot pole");
            return std::cos(z) / s;
        }
        case FuncTag::Sinh:
            return std::sinh(z);
        case FuncTag::Cosh:
            return std::cosh(z);
        case FuncTag::Tanh: {
            Cd c = std::cosh(z);
            if (std::abs(c) < opt.pole_eps) throw PoleError("tanh pole");
            return std::sinh(z) / c;
        }
        case FuncTag::Coth: {
            Cd s = std::sinh(z);
            if (std::abs(s) < opt.pole_eps) throw PoleError("coth pole");
            return std::cosh(z) / s;
        }
        case FuncTag::Arctan:
            if (std::abs(z - Cd(0, 1)) < opt.pole_eps || std::abs(z + Cd(0, 1)) < opt.pole_eps)
                throw PoleError("arctan branch point");
            return std::atan(z);
        case FuncTag::Abs:
            return std::abs(z);
    }
    throw std::runtime_error("unreachable");
}

Cd ipow(Cd z, long long n, const EvalOptions& opt) {
    if (n < 0) {
        if (std::abs(z) < opt.pole_eps) throw PoleError("division by near-zero");
        z = 1.0 / z;
        n = -n;
    }
    Cd r = 1.0;
    while (n > 0) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

Cd eval_rec(const Expr& e, const Bindings& b, const EvalOptions& opt) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Number:
            return Cd(n.value.re().to_double(), n.value.im().to_double());
        case Kind::Pi:
            return Cd(3.14159265358979323846, 0.0);
        case Kind::Var:
        case Kind::Jet:
        case Kind::FuncSym: {
            auto it = b.find(symbol_key(n));
            if (it == b.end()) throw EvalError("unbound symbol '" + symbol_key(n) + "'");
            return it->second;
        }
        case Kind::Func:
            return eval_func(n.func, eval_rec(n.kids[0], b, opt), opt);
        case Kind::Opaque:
            throw EvalError("opaque function '" + n.name + "' is not evaluable");
        case Kind::Sum: {
            Cd r = 0.0;
            for (const auto& k : n.kids) r += eval_rec(k, b, opt);
            return r;
        }
        case Kind::Product: {
            Cd r = 1.0;
            for (const auto& k : n.kids) r *= eval_rec(k, b, opt);
            return r;
        }
        case Kind::Power: {
            Cd base = eval_rec(n.kids[0], b, opt);
            long long k;
            if (is_integer_number(n.kids[1], k)) return ipow(base, k, opt);
            Cd p = eval_rec(n.kids[1], b, opt);
            if (std::abs(base) < opt.pole_eps && p.real() <= 0)
                throw PoleError("power of near-zero base");
            return std::pow(base, p);
        }
    }
    throw std::runtime_error("unreachable");
}

}  // namespace

std::complex<double> eval(const Expr& e, const Bindings& b, const EvalOptions& opt) {
    return eval_rec(e, b, opt);
}

std::complex<double> eval_scaled(const Expr& e, const Bindings& b, double& scale, const EvalOptions& opt) {
    const Node& n = e.node();
    if (n.kind == Kind::Sum) {
        Cd r = 0.0;
        scale = 0.0;
        for (const auto& k : n.kids) {
            Cd t = eval_rec(k, b, opt);
            scale = std::max(scale, std::abs(t));
            r += t;
        }
        return r;
    }
    Cd r = eval_rec(e, b, opt);
    scale = std::abs(r);
    return r;
}

void collect_symbols(const Expr& e, std::map<std::string, Expr>& out) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Var:
        case Kind::Jet:
        case Kind::FuncSym:
            out.emplace(symbol_key(n), e);
            return;
        default:
            for (const auto& k : n.kids) collect_symbols(k, out);
    }
}

bool contains_symbol(const Expr& e, const std::string& key) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Var:
        case Kind::Jet:
        case Kind::FuncSym:
            return symbol_key(n) == key;
        default:
            for (const auto& k : n.kids)
                if (contains_symbol(k, key)) return true;
            return false;
    }
}

bool contains_kind(const Expr& e, Kind k) {
    if (e.kind() == k) return true;
    for (const auto& kid : e.node().kids)
        if (contains_kind(kid, k)) return true;
    return false;
}

}  // namespace fastdiff
