#pragma once

#include <map>
#include <vector>

#include "expr.hpp"

namespace fastdiff {

struct TooComplex : std::runtime_error {
    TooComplex() : std::runtime_error("polynomial expansion too large") {}
};

// sorted (atom id, exponent>0) pairs
using Monomial = std::vector<std::pair<int, int>>;

struct AtomTable {
    std::vector<Expr> atoms;
    std::map<Expr, int, ExprLess> ids;
    int intern(const Expr& e);
};

// multivariate polynomial over the Gaussian rationals in opaque atoms
struct Poly {
    std::map<Monomial, CRat> terms;

    static Poly constant(const CRat& c);
    static Poly atom(int id);

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly pow(long long n) const;  // n >= 0
};

struct RationalForm {
    Poly num, den;
};

inline constexpr size_t kDefaultTermCap = 50000;

// rational normal form of e over atoms interned into `at`; throws TooComplex
// or OverflowError when expansion blows up
RationalForm to_rational(const Expr& e, AtomTable& at, size_t term_cap = kDefaultTermCap);

Expr from_poly(const Poly& p, const AtomTable& at);

// group p by the exponent of `atom_id`; returns degree -> coefficient poly
std::map<int, Poly> collect_by_atom(const Poly& p, int atom_id);

// is `target` a constant-coefficient linear combination of `basis`?
bool in_span(const Poly& target, const std::vector<Poly>& basis);

}  // namespace fastdiff
