#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace fastdiff {

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& what, size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation hit a pole or a function's singular point.
struct PoleError : EvalError {
    using EvalError::EvalError;
};

enum class Kind {
    Number,    // exact Gaussian rational
    Pi,        // named constant pi
    Var,       // plain scalar symbol
    Jet,       // jet variable u_{t^a x^b}, a+b >= 1
    FuncSym,   // opaque unknown function with partial-derivative multi-index
    Func,      // elementary function application
    Opaque,    // opaque univariate function phi^(k)(arg)
    Sum,
    Product,
    Power,
};

enum class FuncTag { Exp, LnAbs, Sin, Cos, Tan, Cot, Sinh, Cosh, Tanh, Coth, Arctan, Abs };

class Expr;
struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    CRat value;                       // Number
    std::string name;                 // Var / Jet dep / FuncSym / Opaque
    int jt = 0, jx = 0;               // Jet orders
    std::vector<std::string> args;    // FuncSym argument names
    std::vector<int> derivs;          // FuncSym derivative counts, aligned with args
    FuncTag func = FuncTag::Exp;      // Func
    int order = 0;                    // Opaque derivative order
    std::vector<Expr> kids;
};

// Immutable, structurally canonical expression. All algebraic constructors
// normalize: sums/products flattened and sorted, like terms collected,
// rational constants folded, pow(e,1) and unary sums/products removed.
class Expr {
public:
    Expr();  // zero

    static Expr num(long long n);
    static Expr num(const Rat& r);
    static Expr num(const CRat& c);
    static Expr imag();
    static Expr pi();
    static Expr var(const std::string& name);
    static Expr jet(const std::string& dep, int dt, int dx);
    static Expr funcsym(const std::string& name, std::vector<std::string> args, std::vector<int> derivs = {});
    static Expr apply(FuncTag f, const Expr& arg);
    static Expr opaque(const std::string& name, int order, const Expr& arg);

    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr pow(const Expr& base, const Expr& exponent);
    static Expr pow(const Expr& base, long long exponent);

    const Node& node() const { return *p_; }
    Kind kind() const { return p_->kind; }
    bool is_number() const { return p_->kind == Kind::Number; }
    bool is_zero_literal() const { return is_number() && p_->value.is_zero(); }
    bool is_one_literal() const { return is_number() && p_->value.is_one(); }
    const CRat& value() const { return p_->value; }

    friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
    friend Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({num(-1), b})}); }
    friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
    friend Expr operator/(const Expr& a, const Expr& b) { return product({a, pow(b, -1)}); }
    Expr operator-() const { return product({num(-1), *this}); }

    // total structural order; defines canonical sorting
    static int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

    explicit Expr(NodePtr p) : p_(std::move(p)) {}
    const NodePtr& ptr() const { return p_; }

private:
    NodePtr p_;
};

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return Expr::compare(a, b) < 0; }
};

// symbol key for a Var or Jet ("x", "u_xx"); FuncSym keyed by display name
std::string symbol_key(const Node& n);

using Bindings = std::map<std::string, std::complex<double>>;
using Substitution = std::map<std::string, Expr>;

Expr parse(const std::string& text);
std::string format(const Expr& e);

// var may be a plain variable ("x") or a jet symbol ("u_xx"); jet variables
// are independent symbols here (total derivatives live in jets.*).
Expr differentiate(const Expr& e, const std::string& var);

Expr substitute(const Expr& e, const Substitution& subs);

// Replace every FuncSym with the given base name: the replacement receives the
// same derivative multi-index (args must match by position). `scale` multiplies.
Expr substitute_funcsym(const Expr& e, const std::string& name, const std::string& new_name, const CRat& scale);
// Replace every FuncSym of `name` by the concrete expression `value`, with the
// derivative multi-index applied by differentiating in the argument names.
Expr substitute_funcsym_values(const Expr& e, const std::string& name, const Expr& value);
// Set all FuncSyms of `name` differentiated at least once in argument `arg` to zero.
Expr drop_funcsym_derivatives(const Expr& e, const std::string& name, const std::string& arg);
// Replace opaque nodes phi^(k) by d^k/dw^k of `profile` (expression in `w`).
Expr substitute_opaque(const Expr& e, const std::string& name, const Expr& profile, const std::string& w);
// Rewrite opaque nodes of derivative order >= `from_order` via the first-order
// rule phi' = rule(phi), with `rule` an expression in variable `ph`.
Expr apply_opaque_ode_rule(const Expr& e, const std::string& name, const Expr& rule, const std::string& ph);

struct EvalOptions {
    double pole_eps = 1e-8;
};

std::complex<double> eval(const Expr& e, const Bindings& b, const EvalOptions& opt = {});
// eval that also reports a magnitude scale (max |term| over top-level sums),
// used for relative zero tests
std::complex<double> eval_scaled(const Expr& e, const Bindings& b, double& scale, const EvalOptions& opt = {});

void collect_symbols(const Expr& e, std::map<std::string, Expr>& out);
bool contains_symbol(const Expr& e, const std::string& key);
bool contains_kind(const Expr& e, Kind k);

const char* func_name(FuncTag f);

}  // namespace fastdiff
