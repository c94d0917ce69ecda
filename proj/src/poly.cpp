#include "poly.hpp"

#include <algorithm>

namespace fastdiff {

int AtomTable::intern(const Expr& e) {
    auto it = ids.find(e);
    if (it != ids.end()) return it->second;
    int id = (int)atoms.size();
    atoms.push_back(e);
    ids.emplace(e, id);
    return id;
}

Poly Poly::constant(const CRat& c) {
    Poly p;
    if (!c.is_zero()) p.terms.emplace(Monomial{}, c);
    return p;
}

Poly Poly::atom(int id) {
    Poly p;
    p.terms.emplace(Monomial{{id, 1}}, CRat(1));
    return p;
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b.terms) {
        auto it = r.terms.find(m);
        if (it == r.terms.end()) {
            r.terms.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    return r;
}

Poly operator-(const Poly& a, const Poly& b) {
    Poly nb;
    for (const auto& [m, c] : b.terms) nb.terms.emplace(m, -c);
    return a + nb;
}

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms) {
        for (const auto& [mb, cb] : b.terms) {
            Monomial m = mono_mul(ma, mb);
            CRat c = ca * cb;
            auto it = r.terms.find(m);
            if (it == r.terms.end()) {
                if (!c.is_zero()) r.terms.emplace(std::move(m), c);
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.terms.erase(it);
            }
        }
        if (r.terms.size() > 4 * kDefaultTermCap) throw TooComplex();
    }
    return r;
}

Poly Poly::pow(long long n) const {
    Poly r = Poly::constant(CRat(1));
    Poly base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

static void cap_check(const RationalForm& rf, size_t cap) {
    if (rf.num.terms.size() > cap || rf.den.terms.size() > cap) throw TooComplex();
}

static RationalForm rf_add(const RationalForm& a, const RationalForm& b, size_t cap) {
    RationalForm r{a.num * b.den + b.num * a.den, a.den * b.den};
    cap_check(r, cap);
    return r;
}

static RationalForm rf_mul(const RationalForm& a, const RationalForm& b, size_t cap) {
    RationalForm r{a.num * b.num, a.den * b.den};
    cap_check(r, cap);
    return r;
}

static RationalForm rf_pow(const RationalForm& a, long long n, size_t cap) {
    RationalForm base = a;
    if (n < 0) {
        if (base.num.is_zero()) throw std::runtime_error("division by structural zero");
        std::swap(base.num, base.den);
        n = -n;
    }
    RationalForm r{base.num.pow(n), base.den.pow(n)};
    cap_check(r, cap);
    return r;
}

// an exponent usable for exact expansion: an integer Number node
static bool integer_exponent(const Expr& e, long long& out) {
    if (!e.is_number()) return false;
    const CRat& v = e.value();
    if (!v.is_real() || !v.re().is_integer()) return false;
    long long n = v.re().num();
    if (n > 64 || n < -64) return false;
    out = n;
    return true;
}

RationalForm to_rational(const Expr& e, AtomTable& at, size_t term_cap) {
    const Node& n = e.node();
    const Poly one = Poly::constant(CRat(1));
    switch (n.kind) {
        case Kind::Number:
            return {Poly::constant(n.value), one};
        case Kind::Sum: {
            RationalForm r{Poly{}, one};
            for (const Expr& k : n.kids) r = rf_add(r, to_rational(k, at, term_cap), term_cap);
            return r;
        }
        case Kind::Product: {
            RationalForm r{one, one};
            for (const Expr& k : n.kids) r = rf_mul(r, to_rational(k, at, term_cap), term_cap);
            return r;
        }
        case Kind::Power: {
            long long p;
            if (integer_exponent(n.kids[1], p))
                return rf_pow(to_rational(n.kids[0], at, term_cap), p, term_cap);
            return {Poly::atom(at.intern(e)), one};
        }
        default:
            return {Poly::atom(at.intern(e)), one};
    }
}

Expr from_poly(const Poly& p, const AtomTable& at) {
    std::vector<Expr> terms;
    for (const auto& [m, c] : p.terms) {
        std::vector<Expr> factors;
        factors.push_back(Expr::num(c));
        for (const auto& [id, exp] : m) factors.push_back(Expr::pow(at.atoms[id], exp));
        terms.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(terms));
}

std::map<int, Poly> collect_by_atom(const Poly& p, int atom_id) {
    std::map<int, Poly> out;
    for (const auto& [m, c] : p.terms) {
        int deg = 0;
        Monomial rest;
        for (const auto& [id, exp] : m) {
            if (id == atom_id)
                deg = exp;
            else
                rest.push_back({id, exp});
        }
        out[deg].terms.emplace(std::move(rest), c);
    }
    return out;
}

bool in_span(const Poly& target, const std::vector<Poly>& basis) {
    // solve basis * c = target exactly by Gaussian elimination on the
    // (monomial x basis) coefficient matrix
    std::map<Monomial, size_t> rows;
    auto row_of = [&](const Monomial& m) {
        auto it = rows.find(m);
        if (it != rows.end()) return it->second;
        size_t r = rows.size();
        rows.emplace(m, r);
        return r;
    };
    for (const Poly& b : basis)
        for (const auto& [m, c] : b.terms) row_of(m);
    for (const auto& [m, c] : target.terms) row_of(m);

    size_t nr = rows.size(), nc = basis.size();
    std::vector<std::vector<CRat>> A(nr, std::vector<CRat>(nc + 1, CRat(0)));
    for (size_t j = 0; j < nc; ++j)
        for (const auto& [m, c] : basis[j].terms) A[rows[m]][j] = c;
    for (const auto& [m, c] : target.terms) A[rows[m]][nc] = c;

    size_t rank_row = 0;
    for (size_t col = 0; col < nc && rank_row < nr; ++col) {
        size_t piv = rank_row;
        while (piv < nr && A[piv][col].is_zero()) ++piv;
        if (piv == nr) continue;
        std::swap(A[piv], A[rank_row]);
        CRat inv = CRat(1) / A[rank_row][col];
        for (size_t j = col; j <= nc; ++j) A[rank_row][j] = A[rank_row][j] * inv;
        for (size_t i = 0; i < nr; ++i) {
            if (i == rank_row || A[i][col].is_zero()) continue;
            CRat f = A[i][col];
            for (size_t j = col; j <= nc; ++j) A[i][j] = A[i][j] - f * A[rank_row][j];
        }
        ++rank_row;
    }
    // consistent iff no row reads 0 ... 0 | nonzero
    for (size_t i = 0; i < nr; ++i) {
        bool all_zero = true;
        for (size_t j = 0; j < nc; ++j)
            if (!A[i][j].is_zero()) { all_zero = false; break; }
        if (all_zero && !A[i][nc].is_zero()) return false;
    }
    return true;
}

}  // namespace fastdiff
