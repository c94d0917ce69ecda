#include "fastdiff/fastdiff.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <string>

#include "json.hpp"
#include "fdsim.hpp"
#include "reduce.hpp"

using json = nlohmann::ordered_json;
using namespace fastdiff;

struct fd_context {
    unsigned long long seed = 0xFD5EEDull;
    double tolerance = 1e-9;
    bool timestamps = true;
    std::string last_error;
};

namespace {

char* dup_string(const std::string& s) {
    char* p = (char*)std::malloc(s.size() + 1);
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

bool glob_match(const char* pat, const char* s) {
    if (*pat == '\0') return *s == '\0';
    if (*pat == '*') return glob_match(pat + 1, s) || (*s != '\0' && glob_match(pat, s + 1));
    return *s == *pat && glob_match(pat + 1, s + 1);
}

bool selected(const char* filter, const std::string& key) {
    if (filter == nullptr || *filter == '\0') return true;
    return glob_match(filter, key.c_str());
}

ProbeOptions probe_options(const fd_context* ctx) {
    ProbeOptions opt;
    opt.seed = ctx->seed;
    opt.tolerance = ctx->tolerance;
    return opt;
}

json report_shell(const fd_context* ctx) {
    json r;
    r["schema"] = 1;
    r["seed"] = ctx->seed;
    r["tolerance"] = ctx->tolerance;
    if (ctx->timestamps) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
        r["generated_at"] = buf;
    }
    return r;
}

fd_status finalize(fd_context* ctx, json& r, json records, char** out) {
    if (!ctx->timestamps)  // timings vary run to run; drop them for reproducible output
        for (auto& rec : records) rec.erase("ms");
    std::sort(records.begin(), records.end(),
              [](const json& a, const json& b) { return a.at("key") < b.at("key"); });
    int passed = 0;
    for (const auto& rec : records)
        if (rec.at("pass").get<bool>()) ++passed;
    r["records"] = std::move(records);
    r["summary"] = {{"total", r["records"].size()},
                    {"passed", passed},
                    {"failed", (int)r["records"].size() - passed}};
    if (out) *out = dup_string(r.dump(2) + "\n");
    if (passed == (int)r["records"].size()) return FD_OK;
    ctx->last_error = "some checks failed";
    return FD_FAIL;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
fd_status guarded(fd_context* ctx, char** out, F body) {
    if (ctx == nullptr) return FD_USAGE;
    ctx->last_error.clear();
    if (out) *out = nullptr;
    try {
        return body();
    } catch (const EvalError& e) {
        ctx->last_error = e.what();
        return FD_RUNTIME;
    } catch (const std::exception& e) {
        ctx->last_error = e.what();
        return FD_RUNTIME;
    }
}

}  // namespace

extern "C" {

fd_context* fd_context_create(void) { return new fd_context; }
void fd_context_destroy(fd_context* ctx) { delete ctx; }
void fd_context_set_seed(fd_context* ctx, unsigned long long seed) { ctx->seed = seed; }
void fd_context_set_tolerance(fd_context* ctx, double tolerance) { ctx->tolerance = tolerance; }
void fd_context_set_timestamps(fd_context* ctx, int enabled) { ctx->timestamps = enabled != 0; }
const char* fd_last_error(const fd_context* ctx) { return ctx ? ctx->last_error.c_str() : ""; }
void fd_free(char* p) { std::free(p); }

fd_status fd_verify_operators(fd_context* ctx, const char* filter, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        ProbeOptions opt = probe_options(ctx);
        json records = json::array();
        for (const CatalogOperator& c : operator_catalog()) {
            if (!selected(filter, c.key)) continue;
            auto t0 = std::chrono::steady_clock::now();
            ZeroReport z = is_reduction_operator(c.eq, c.op, opt);
            records.push_back({{"key", c.key},
                               {"check", "conditional-invariance"},
                               {"verdict", verdict_name(z.verdict)},
                               {"max_abs", z.max_abs},
                               {"probes", z.probes_used},
                               {"ms", ms_since(t0)},
                               {"pass", verdict_zero(z.verdict)}});
        }
        if (records.empty()) {
            ctx->last_error = "no operator keys match the filter";
            return FD_USAGE;
        }
        json r = report_shell(ctx);
        return finalize(ctx, r, std::move(records), json_out);
    });
}

fd_status fd_verify_solutions(fd_context* ctx, const char* filter, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        ProbeOptions opt = probe_options(ctx);
        EvolutionEquation fd = make_equation(Family::Diffusion, parse("1/u"));
        EvolutionEquation pot = make_equation(Family::Filtration, parse("1/v_x"));
        json records = json::array();
        auto push = [&](const std::string& key, const char* check, const ZeroReport& z,
                        double ms) {
            records.push_back({{"key", key + "/" + check},
                               {"check", check},
                               {"verdict", verdict_name(z.verdict)},
                               {"max_abs", z.max_abs},
                               {"probes", z.probes_used},
                               {"ms", ms},
                               {"pass", verdict_zero(z.verdict)}});
        };
        for (const std::string& key : solution_keys()) {
            if (!selected(filter, key)) continue;
            SolutionPair p = find_solution(key);
            auto t0 = std::chrono::steady_clock::now();
            if (p.u) push(key, "pde-u", pde_residual(*p.u, fd, opt), ms_since(t0));
            if (p.v) {
                t0 = std::chrono::steady_clock::now();
                push(key, "pde-v", pde_residual(*p.v, pot, opt), ms_since(t0));
            }
            if (p.u && p.v) {
                t0 = std::chrono::steady_clock::now();
                auto rs = potential_residuals(p, parse("1/s"), opt);
                push(key, "potential-vx", rs[0], ms_since(t0));
                push(key, "potential-vt", rs[1], ms_since(t0));
            }
        }
        if (records.empty()) {
            ctx->last_error = "no solution keys match the filter";
            return FD_USAGE;
        }
        json r = report_shell(ctx);
        return finalize(ctx, r, std::move(records), json_out);
    });
}

fd_status fd_derive(fd_context* ctx, const char* f_spec, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        if (f_spec == nullptr || *f_spec == '\0') {
            ctx->last_error = "empty nonlinearity";
            return FD_USAGE;
        }
        Expr f;
        try {
            f = substitute(parse(f_spec), {{"vx", Expr::var("s")}, {"u", Expr::var("s")}});
        } catch (const std::exception& e) {
            ctx->last_error = std::string("cannot parse nonlinearity: ") + e.what();
            return FD_USAGE;
        }
        ProbeOptions opt = probe_options(ctx);
        DeterminingSystem sys;
        try {
            sys = derive_determining_tau1(f, opt);
        } catch (const EvalError& e) {
            ctx->last_error = e.what();
            return FD_USAGE;
        }
        json r = report_shell(ctx);
        r["nonlinearity"] = format(f);
        json residuals = json::array();
        for (const Expr& e : sys.residuals) residuals.push_back(format(e));
        r["residuals"] = residuals;
        json unknowns = json::array();
        for (const auto& [name, args] : sys.unknowns) unknowns.push_back(name);
        r["unknowns"] = unknowns;
        bool ref = systems_equivalent(sys, reference_tau1_system());
        r["matches_reference"] = ref;
        r["restricted_matches_eta_system"] =
            ref && systems_equivalent(restrict_v_independent(sys), reference_eta_system());
        if (json_out) *json_out = dup_string(r.dump(2) + "\n");
        return FD_OK;
    });
}

fd_status fd_arrows(fd_context* ctx, const char* id, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        std::vector<std::string> ids;
        for (const Arrow& a : arrow_catalog())
            if (id == nullptr || *id == '\0' || a.id == id) ids.push_back(a.id);
        if (ids.empty()) {
            ctx->last_error = "unknown arrow id";
            return FD_USAGE;
        }
        json records = json::array();
        for (const std::string& aid : ids) {
            auto t0 = std::chrono::steady_clock::now();
            ArrowReport rep = check_arrow(aid, ctx->tolerance < 1e-8 ? 1e-8 : ctx->tolerance,
                                          ctx->seed);
            records.push_back({{"key", aid},
                               {"check", "hodograph-arrow"},
                               {"verdict", rep.verified ? "verified" : "unverified"},
                               {"max_err", rep.max_err},
                               {"samples", rep.samples},
                               {"val_shift", rep.val_shift},
                               {"arg_shift", rep.arg_shift},
                               {"ms", ms_since(t0)},
                               {"pass", rep.verified}});
        }
        json r = report_shell(ctx);
        return finalize(ctx, r, std::move(records), json_out);
    });
}

fd_status fd_reduce(fd_context* ctx, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        ProbeOptions opt = probe_options(ctx);
        EvolutionEquation fd = make_equation(Family::Diffusion, parse("1/u"));
        EvolutionEquation pot = make_equation(Family::Filtration, parse("1/v_x"));
        json records = json::array();
        auto run = [&](const std::string& key, const EvolutionEquation& eq,
                       const ReductionOperator& q, const InvariantPair& inv,
                       const std::vector<const char*>& profiles) {
            auto t0 = std::chrono::steady_clock::now();
            ReducedODE ode = reduce(eq, q, inv, opt);
            bool ok = !contains_symbol(ode.residual, "t") && !contains_symbol(ode.residual, eq.dep);
            json checked = json::array();
            for (const char* prof : profiles) {
                bool z = verdict_zero(ode_profile_check(ode, parse(prof), opt).verdict);
                checked.push_back({{"profile", prof}, {"satisfies", z}});
                ok = ok && z;
            }
            records.push_back({{"key", key},
                               {"check", "reduction"},
                               {"residual", format(ode.residual)},
                               {"profiles", checked},
                               {"ms", ms_since(t0)},
                               {"pass", ok}});
        };
        run("reduce.pot.stationary", pot, {"v", parse("1"), parse("0"), parse("0")},
            {parse("v"), parse("x")}, {"3 - 2*w"});
        run("reduce.pot.case1", pot, {"v", parse("1"), parse("0"), parse("-2/x")},
            {parse("v + 2*t/x"), parse("x")}, {"1/w"});
        run("reduce.fd.selfsim", fd, {"u", parse("t"), parse("0"), parse("u")},
            {parse("u/t"), parse("x")},
            {"2/cos(w)^2", "-2/cosh(w)^2", "2/sinh(w)^2"});
        json r = report_shell(ctx);
        return finalize(ctx, r, std::move(records), json_out);
    });
}

fd_status fd_catalog(fd_context* ctx, char** json_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        json r = report_shell(ctx);
        json ops = json::array(), sols = json::array(), arrows = json::array();
        for (const CatalogOperator& c : operator_catalog()) ops.push_back(c.key);
        for (const std::string& k : solution_keys()) sols.push_back(k);
        for (const Arrow& a : arrow_catalog()) arrows.push_back(a.id);
        std::sort(ops.begin(), ops.end());
        std::sort(sols.begin(), sols.end());
        std::sort(arrows.begin(), arrows.end());
        r["operators"] = ops;
        r["solutions"] = sols;
        r["arrows"] = arrows;
        if (json_out) *json_out = dup_string(r.dump(2) + "\n");
        return FD_OK;
    });
}

fd_status fd_simulate(fd_context* ctx, const char* oracle_key, double x0, double x1, int n,
                      double t0, double t1, double sigma, int levels, int implicit,
                      char** json_out, char** csv_out) {
    return guarded(ctx, json_out, [&]() -> fd_status {
        if (csv_out) *csv_out = nullptr;
        if (oracle_key == nullptr || *oracle_key == '\0') {
            ctx->last_error = "missing oracle key";
            return FD_USAGE;
        }
        std::string key = oracle_key;
        bool filtration = false;
        if (auto pos = key.find(':'); pos != std::string::npos) {
            std::string side = key.substr(pos + 1);
            key.resize(pos);
            if (side == "v")
                filtration = true;
            else if (side != "u") {
                ctx->last_error = "oracle side must be :u or :v";
                return FD_USAGE;
            }
        }
        SolutionPair p;
        try {
            p = find_solution(key);
        } catch (const std::exception&) {
            ctx->last_error = "unknown solution key: " + key;
            return FD_USAGE;
        }
        const std::optional<ExactSolution>& side = filtration ? p.v : p.u;
        if (!side || side->mode != SolutionMode::Explicit) {
            ctx->last_error = "no closed-form oracle for " + std::string(oracle_key);
            return FD_USAGE;
        }
        if (n < 8 || !(x1 > x0) || !(t1 > t0) || !(sigma > 0.0)) {
            ctx->last_error = "invalid grid parameters";
            return FD_USAGE;
        }
        EvolutionEquation eq = filtration ? make_equation(Family::Filtration, parse("1/v_x"))
                                          : make_equation(Family::Diffusion, parse("1/u"));
        Oracle oracle = make_oracle(*side);
        Grid grid{x0, x1, n, t0, t1, 0.0};
        grid.dt = stable_dt(eq, oracle, grid, sigma);
        Scheme scheme = implicit ? Scheme::ImplicitNewton : Scheme::Explicit;

        json r = report_shell(ctx);
        r["oracle"] = oracle_key;
        r["scheme"] = implicit ? "implicit-newton" : "explicit";
        ErrorReport rep;
        if (levels >= 3) {
            rep = convergence_study(eq, oracle, grid, levels, scheme);
            r["observed_order"] = rep.observed_order;
        } else {
            SimResult s = simulate(eq, oracle, grid, scheme);
            ConvergenceLevel cl;
            cl.h = grid.h();
            cl.dt = grid.dt;
            cl.max_err = s.max_err;
            cl.l2_err = s.l2_err;
            rep.levels.push_back(cl);
            r["mass_drift_rel"] = s.mass_drift_rel;
            r["steps"] = s.steps;
        }
        json lv = json::array();
        for (const auto& l : rep.levels)
            lv.push_back({{"level", l.level},
                          {"h", l.h},
                          {"dt", l.dt},
                          {"max_err", l.max_err},
                          {"l2_err", l.l2_err},
                          {"order", l.order}});
        r["levels"] = lv;
        if (json_out) *json_out = dup_string(r.dump(2) + "\n");
        if (csv_out) *csv_out = dup_string(to_csv(rep));
        return FD_OK;
    });
}

}  // extern "C"
