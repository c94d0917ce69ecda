#include "fdsim.hpp"

#include <cmath>
#include <sstream>

namespace fastdiff {

namespace {

enum class Form { LogDiffusion, Filtration };

Form classify(const EvolutionEquation& eq) {
    if (eq.dep == "u") {
        Expr ref = make_equation(Family::Diffusion, parse("1/u")).rhs;
        if (verdict_zero(is_zero(eq.rhs - ref).verdict)) return Form::LogDiffusion;
    } else if (eq.dep == "v") {
        Expr ref = make_equation(Family::Filtration, parse("1/v_x")).rhs;
        if (verdict_zero(is_zero(eq.rhs - ref).verdict)) return Form::Filtration;
    }
    throw EvalError("simulation supports u_t = (ln u)_xx and v_t = v_xx/v_x only");
}

void validate(const Grid& g) {
    if (g.n < 8) throw EvalError("grid needs at least 8 nodes");
    if (!(g.x1 > g.x0) || !(g.t1 > g.t0)) throw EvalError("grid intervals must be increasing");
}

void check_positive(const std::vector<double>& u) {
    for (double v : u)
        if (!(v > 0.0) || !std::isfinite(v))
            throw EvalError("positivity lost during time stepping");
}

// spatial operator at interior node i
double rhs_at(Form form, const std::vector<double>& w, int i, double h) {
    if (form == Form::LogDiffusion)
        return (std::log(w[i + 1]) - 2.0 * std::log(w[i]) + std::log(w[i - 1])) / (h * h);
    double vx = (w[i + 1] - w[i - 1]) / (2.0 * h);
    if (std::fabs(vx) < 1e-10) throw EvalError("gradient underflow in filtration step");
    return (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h) / vx;
}

// one backward-Euler step, Newton with a tridiagonal Jacobian (Thomas solve)
void implicit_step(Form form, std::vector<double>& w, const std::vector<double>& prev, double dt,
                   double h) {
    const int n = (int)w.size();
    std::vector<double> lo(n), di(n), up(n), rhs(n), g(n);
    for (int it = 0; it < 50; ++it) {
        if (form == Form::LogDiffusion) check_positive(w);
        double res = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            g[i] = w[i] - prev[i] - dt * rhs_at(form, w, i, h);
            res = std::max(res, std::fabs(g[i]));
            if (form == Form::LogDiffusion) {
                lo[i] = -dt / (h * h * w[i - 1]);
                di[i] = 1.0 + 2.0 * dt / (h * h * w[i]);
                up[i] = -dt / (h * h * w[i + 1]);
            } else {
                double a = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
                double b = (w[i + 1] - w[i - 1]) / (2.0 * h);
                lo[i] = -dt * (1.0 / (h * h) / b + a / (2.0 * h * b * b));
                di[i] = 1.0 + dt * 2.0 / (h * h * b);
                up[i] = -dt * (1.0 / (h * h) / b - a / (2.0 * h * b * b));
            }
        }
        if (res < 1e-12) return;
        // Thomas sweep over the interior, boundary corrections folded in (delta = 0 there)
        for (int i = 2; i + 1 < n; ++i) {
            double m = lo[i] / di[i - 1];
            di[i] -= m * up[i - 1];
            g[i] -= m * g[i - 1];
        }
        rhs[n - 2] = g[n - 2] / di[n - 2];
        for (int i = n - 3; i >= 1; --i) rhs[i] = (g[i] - up[i] * rhs[i + 1]) / di[i];
        for (int i = 1; i + 1 < n; ++i) w[i] -= rhs[i];
    }
    throw EvalError("Newton iteration failed to converge");
}

}  // namespace

Oracle make_oracle(const ExactSolution& s) {
    return [s](double t, double x) { return sample(s, t, x); };
}

double stable_dt(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid,
                 double sigma) {
    Form form = classify(eq);
    validate(grid);
    double h = grid.h(), dmax = 0.0;
    std::vector<double> w(grid.n);
    for (int i = 0; i < grid.n; ++i) w[i] = oracle(grid.t0, grid.x0 + i * h);
    for (int i = 0; i < grid.n; ++i) {
        double d;
        if (form == Form::LogDiffusion) {
            if (!(w[i] > 0.0)) throw EvalError("initial data not positive");
            d = 1.0 / w[i];
        } else {
            int j = std::min(std::max(i, 1), grid.n - 2);
            double vx = (w[j + 1] - w[j - 1]) / (2.0 * h);
            if (std::fabs(vx) < 1e-10) throw EvalError("initial gradient underflow");
            d = 1.0 / std::fabs(vx);
        }
        dmax = std::max(dmax, d);
    }
    return sigma * h * h / dmax;
}

SimResult simulate(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid,
                   Scheme scheme) {
    Form form = classify(eq);
    validate(grid);
    if (!(grid.dt > 0.0)) throw EvalError("time step must be positive");
    const int n = grid.n;
    const double h = grid.h();

    SimResult r;
    r.x.resize(n);
    for (int i = 0; i < n; ++i) r.x[i] = grid.x0 + i * h;
    std::vector<double> w(n), next(n);
    for (int i = 0; i < n; ++i) w[i] = oracle(grid.t0, r.x[i]);

    double mass0 = 0.0;
    for (int i = 1; i + 1 < n; ++i) mass0 += w[i] * h;
    double flux_sum = 0.0;  // accumulated boundary flux of the conserved density
    double dmax = 0.0;

    double t = grid.t0;
    while (t < grid.t1 - 1e-14) {
        double dt = std::min(grid.dt, grid.t1 - t);
        if (form == Form::LogDiffusion) {
            check_positive(w);
            for (int i = 0; i < n; ++i) dmax = std::max(dmax, 1.0 / w[i]);
        }
        next[0] = oracle(t + dt, r.x[0]);
        next[n - 1] = oracle(t + dt, r.x[n - 1]);
        if (scheme == Scheme::Explicit) {
            for (int i = 1; i + 1 < n; ++i) next[i] = w[i] + dt * rhs_at(form, w, i, h);
        } else {
            for (int i = 1; i + 1 < n; ++i) next[i] = w[i];
            implicit_step(form, next, w, dt, h);
        }
        if (form == Form::LogDiffusion) {
            // discrete flux (ln u)_x through both ends of the interior stencil
            auto flux = [&](const std::vector<double>& s) {
                return (std::log(s[n - 1]) - std::log(s[n - 2])) / h -
                       (std::log(s[1]) - std::log(s[0])) / h;
            };
            flux_sum += dt * (scheme == Scheme::Explicit ? flux(w) : flux(next));
        }
        std::swap(w, next);
        t += dt;
        ++r.steps;
    }
    if (form == Form::LogDiffusion) check_positive(w);

    r.final_values = w;
    double l2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double e = std::fabs(w[i] - oracle(grid.t1, r.x[i]));
        r.max_err = std::max(r.max_err, e);
        l2 += e * e * h;
    }
    r.l2_err = std::sqrt(l2);
    r.sigma = grid.dt * dmax / (h * h);
    if (form == Form::LogDiffusion) {
        double mass1 = 0.0;
        for (int i = 1; i + 1 < n; ++i) mass1 += w[i] * h;
        r.mass_drift_rel = std::fabs(mass1 - mass0 - flux_sum) / std::max(std::fabs(mass0), 1e-30);
    }
    return r;
}

ErrorReport convergence_study(const EvolutionEquation& eq, const Oracle& oracle, const Grid& base,
                              int levels, Scheme scheme) {
    if (levels < 3) throw EvalError("convergence study needs at least 3 levels");
    ErrorReport rep;
    Grid g = base;
    for (int l = 0; l < levels; ++l) {
        SimResult s = simulate(eq, oracle, g, scheme);
        ConvergenceLevel cl;
        cl.level = l;
        cl.h = g.h();
        cl.dt = g.dt;
        cl.max_err = s.max_err;
        cl.l2_err = s.l2_err;
        if (l > 0) cl.order = std::log2(rep.levels.back().max_err / cl.max_err);
        rep.levels.push_back(cl);
        g.n = 2 * g.n - 1;
        g.dt /= 4.0;
    }
    size_t k = rep.levels.size();
    rep.observed_order = 0.5 * (rep.levels[k - 1].order + rep.levels[k - 2].order);
    return rep;
}

double truncation_residual(const EvolutionEquation& eq, const Oracle& oracle, const Grid& grid) {
    Form form = classify(eq);
    validate(grid);
    const double h = grid.h();
    double dmax = 0.0;
    std::vector<double> w(grid.n);
    for (int i = 0; i < grid.n; ++i) w[i] = oracle(grid.t0, grid.x0 + i * h);
    // centered time derivative with a step matched to the spatial accuracy
    double k = h;
    for (int i = 1; i + 1 < grid.n; ++i) {
        double x = grid.x0 + i * h;
        double wt = (oracle(grid.t0 + k, x) - oracle(grid.t0 - k, x)) / (2.0 * k);
        dmax = std::max(dmax, std::fabs(wt - rhs_at(form, w, i, h)));
    }
    return dmax;
}

std::string to_csv(const ErrorReport& r) {
    std::ostringstream out;
    out << "level,h,dt,max_err,l2_err,order\n";
    out.setf(std::ios::scientific);
    out.precision(10);
    for (const auto& l : r.levels)
        out << l.level << ',' << l.h << ',' << l.dt << ',' << l.max_err << ',' << l.l2_err << ','
            << l.order << '\n';
    return out.str();
}

}  // namespace fastdiff
