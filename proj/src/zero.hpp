#pragma once

#include <cstdint>

#include "expr.hpp"

namespace fastdiff {

enum class Verdict { ProvedZero, ProvedNonzero, NumericallyZero, NumericallyNonzero };

const char* verdict_name(Verdict v);
inline bool verdict_zero(Verdict v) { return v == Verdict::ProvedZero || v == Verdict::NumericallyZero; }

struct ProbeOptions {
    std::uint64_t seed = 0xFD5EEDull;
    double tolerance = 1e-9;
    int probes = 64;
    double pole_eps = 1e-8;
};

struct ZeroReport {
    Verdict verdict = Verdict::NumericallyNonzero;
    double max_abs = 0.0;   // max relative residual over accepted probes
    int probes_used = 0;
};

// Rewrite trigonometric and hyperbolic functions through complex exponentials
// so that identities like cot^2+1 = 1/sin^2 cancel in the rational normal form.
// Exponential arguments are split termwise and integer multiples of a common
// kernel merge; exp(i*pi*p/2) folds to a power of i.
Expr trig_to_exp(const Expr& e);

// Semi-decision for "e == 0 identically". Exact rational normalization first
// (optionally after trig_to_exp), then seeded numeric probing at random points.
// Expressions containing lnabs/abs are probed over the reals, everything else
// over the complexes. Throws EvalError if probing cannot find enough
// admissible points.
ZeroReport is_zero(const Expr& e, const ProbeOptions& opt = {});

// Exact path only: true iff the rational normal form (with and without the
// exponential rewrite) proves the expression identically zero.
bool proved_zero(const Expr& e);

}  // namespace fastdiff
