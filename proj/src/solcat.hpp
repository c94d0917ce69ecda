#pragma once

#include <array>
#include <functional>
#include <optional>

#include "opcat.hpp"

namespace fastdiff {

// closure rule for an opaque profile: name' = rule, with rule written in `ph`
// standing for the profile value (arg_form false) or its argument (arg_form true)
struct OdeRule {
    std::string name;
    Expr rule;
    std::string ph;
    bool arg_form = false;
};

enum class SolutionMode { Explicit, ImplicitTheta };

struct ExactSolution {
    std::string dep;
    SolutionMode mode = SolutionMode::Explicit;
    Expr expr;                 // may contain Opaque profile applications
    std::vector<OdeRule> rules;
    std::vector<Expr> domain;  // admissible iff every entry evaluates > 0
};

struct SolutionPair {
    std::string key;
    std::optional<ExactSolution> u;  // diffusion side
    std::optional<ExactSolution> v;  // filtration side
    std::optional<Expr> u_alt;       // difference-of-waves form where one is listed
};

using Params = std::map<std::string, Rat>;

// index 1: eps in {-1,0,1}; 3: mu; 4: eps in {0,1,-1,4,-4}; 8: mu (u only)
SolutionPair lie_solution(int index, const Params& params = {});
SolutionPair nonlie_solution(int index);  // 1..6 for the primed list

struct TwoWave {
    Expr cot_form;
    Expr closed_form;
};
TwoWave two_wave(const Expr& alpha, const Expr& beta, const Expr& gamma, const Expr& delta);

std::vector<std::array<Expr, 4>> real_tuple_table();
// which primed solution each table tuple reproduces (closed forms agree exactly)
std::vector<int> tuple_matchings();

ZeroReport pde_residual(const ExactSolution& s, const EvolutionEquation& eq,
                        const ProbeOptions& opt = {});
// residuals of v_x = u and v_t = f(u) u_x for the pair
std::vector<ZeroReport> potential_residuals(const SolutionPair& p, const Expr& f_univariate,
                                            const ProbeOptions& opt = {});

SolutionPair apply_group(const G1Element& g, const SolutionPair& p);
SolutionPair apply_group(const G2Element& g, const SolutionPair& p);  // plain branch only

// formula substitution t -> t+tshift, x -> sx*x, v -> av*v + bv; the modified
// pair solves both equations iff av = 1/sx, which is enforced
struct PairModifier {
    Expr tshift = Expr::num(0);
    Rat sx{1};
    Expr bv = Expr::num(0);
};
SolutionPair modify(const SolutionPair& p, const PairModifier& m);

// real-point evaluation (Explicit mode); throws PoleError/EvalError
double sample(const ExactSolution& s, double t, double x);
bool admissible(const ExactSolution& s, double t, double x);
// numeric theta profile of solution 8: RK4 on theta' = theta-1+mu e^-theta,
// anchor theta(0)=2, step 1e-3
double lie8_theta(double mu, double w);
double lie8_sample(double mu, double t, double x);

// hodograph image evaluated numerically: u~(t,y) and v~(t,y) with y = v(t,x)
struct NumericPair {
    std::function<double(double, double)> u, v;
};
// inversion of v(t,.)=y by bracketed bisection over [xlo,xhi]
NumericPair apply_hodograph(const SolutionPair& p, double xlo, double xhi);

struct Arrow {
    std::string id;
    SolutionPair src;
    std::vector<Expr> src_extra;  // additional domain predicates on source (t,x)
    SolutionPair tgt;
    std::vector<Expr> tgt_extra;  // predicates on target coordinates (t, y)
};
const std::vector<Arrow>& arrow_catalog();  // 8 + 7 entries

struct ArrowReport {
    std::string id;
    bool verified = false;
    double max_err = 0.0;
    int samples = 0;
    double val_shift = 0.0;  // fitted additive constant in the v comparison
    double arg_shift = 0.0;  // fitted x-translation applied to the target argument
};
ArrowReport check_arrow(const std::string& id, double tol = 1e-8, unsigned long long seed = 0xFD5EEDull);

const std::vector<std::string>& solution_keys();  // lie.1..8, nonlie.1p..6p
SolutionPair find_solution(const std::string& key);  // default params per key

}  // namespace fastdiff
