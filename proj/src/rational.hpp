#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fastdiff {

struct OverflowError : std::runtime_error {
    OverflowError() : std::runtime_error("rational overflow") {}
};

// Exact rational over int64 with overflow detection. Coefficients in the
// catalog stay tiny; polynomial normalization can grow them, in which case
// callers fall back to numeric probing.
class Rat {
public:
    Rat() = default;
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) : num_(n), den_(d) {
        if (den_ == 0) throw std::runtime_error("zero denominator");
        reduce();
    }

    long long num() const { return num_; }
    long long den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return Rat::make(add128(mul128(a.num_, b.den_), mul128(b.num_, a.den_)), mul128(a.den_, b.den_));
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return Rat::make(add128(mul128(a.num_, b.den_), -mul128(b.num_, a.den_)), mul128(a.den_, b.den_));
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return Rat::make(mul128(a.num_, b.num_), mul128(a.den_, b.den_));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::runtime_error("rational division by zero");
        return Rat::make(mul128(a.num_, b.den_), mul128(a.den_, b.num_));
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return mul128(a.num_, b.den_) < mul128(b.num_, a.den_);
    }

    double to_double() const { return double(num_) / double(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    static __int128 mul128(__int128 a, __int128 b) { return a * b; }
    static __int128 add128(__int128 a, __int128 b) { return a + b; }

    static Rat make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw OverflowError();
        Rat r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }
    void reduce() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_ = 0;
    long long den_ = 1;
};

// Gaussian rational re + im*i: the exact constant field of the engine.
class CRat {
public:
    CRat() = default;
    CRat(long long n) : re_(n) {}
    CRat(Rat re) : re_(re) {}
    CRat(Rat re, Rat im) : re_(re), im_(im) {}

    static CRat i() { return CRat(Rat(0), Rat(1)); }

    const Rat& re() const { return re_; }
    const Rat& im() const { return im_; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_one() const { return re_.is_one() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    friend CRat operator+(const CRat& a, const CRat& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
    friend CRat operator-(const CRat& a, const CRat& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
    CRat operator-() const { return {-re_, -im_}; }
    friend CRat operator*(const CRat& a, const CRat& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend CRat operator/(const CRat& a, const CRat& b) {
        Rat n = b.re_ * b.re_ + b.im_ * b.im_;
        if (n.is_zero()) throw std::runtime_error("complex rational division by zero");
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }
    friend bool operator==(const CRat& a, const CRat& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }
    friend bool operator<(const CRat& a, const CRat& b) {
        if (a.re_ != b.re_) return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    CRat pow(long long e) const {
        CRat base = *this;
        if (e < 0) {
            base = CRat(1) / base;
            e = -e;
        }
        CRat r(1);
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

private:
    Rat re_;
    Rat im_;
};

}  // namespace fastdiff
