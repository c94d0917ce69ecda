#pragma once

#include <functional>

#include "solcat.hpp"

namespace fastdiff {

struct Grid {
    double x0 = -1.0, x1 = 1.0;
    int n = 65;          // node count, >= 8
    double t0 = 0.0, t1 = 1.0;
    double dt = 1e-4;
    double h() const { return (x1 - x0) / (n - 1); }
};

enum class Scheme { Explicit, ImplicitNewton };

using Oracle = std::function<double(double, double)>;  // (t, x) -> value
Oracle make_oracle(const ExactSolution& s);

struct SimResult {
    std::vector<double> x;
    std::vector<double> final_values;
    double max_err = 0.0, l2_err = 0.0;
    double mass_drift_rel = 0.0;  // conservation defect relative to boundary flux
    double sigma = 0.0;           // realized dt * max diffusivity / h^2
    long long steps = 0;
};

// evolves u_t = (ln u)_xx (dep "u") or v_t = v_xx / v_x (dep "v") with Dirichlet
// data taken from the oracle; throws on positivity loss, |v_x| underflow, or
// Newton non-convergence (tolerance 1e-12, 50 iterations)
SimResult simulate(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid,
                   Scheme scheme = Scheme::Explicit);

// dt bound sigma * h^2 / max diffusivity, scanned over the initial data
double stable_dt(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid,
                 double sigma = 0.2);

struct ConvergenceLevel {
    int level = 0;
    double h = 0.0, dt = 0.0;
    double max_err = 0.0, l2_err = 0.0;
    double order = 0.0;  // log2 ratio vs previous level, 0 on the first
};
struct ErrorReport {
    std::vector<ConvergenceLevel> levels;
    double observed_order = 0.0;  // mean of the last two level orders
};

// halves h per level (dt scaled by 1/4), levels >= 3
ErrorReport convergence_study(const EvolutionEquation& eq, const Oracle& oracle, const Grid& base,
                              int levels, Scheme scheme = Scheme::Explicit);

// max |discrete operator residual| of the oracle on the grid interior at t0
double truncation_residual(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid);

std::string to_csv(const ErrorReport& r);  // level,h,dt,max_err,l2_err,order

}  // namespace fastdiff
