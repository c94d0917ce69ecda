#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fastdiff/fastdiff.h"

namespace {

struct Options {
    unsigned long long seed = 0xFD5EEDull;
    double tolerance = 1e-9;
    std::string json_path;
    bool no_timestamps = false;
};

// writes the report to --json PATH when given, otherwise to stdout
int emit(const Options& opt, fd_status st, char* json, fd_context* ctx) {
    if (json != nullptr) {
        if (!opt.json_path.empty()) {
            std::ofstream out(opt.json_path, std::ios::binary);
            out << json;
        } else {
            std::fputs(json, stdout);
        }
        fd_free(json);
    }
    if (st != FD_OK) std::fprintf(stderr, "error: %s\n", fd_last_error(ctx));
    return (int)st;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetry and simulation toolkit for the fast diffusion equation"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--seed", opt.seed, "probe seed");
    app.add_option("--tolerance", opt.tolerance, "numeric tolerance");
    app.add_option("--json", opt.json_path, "write the JSON report to this path");
    app.add_flag("--no-timestamps", opt.no_timestamps, "omit timestamps for reproducible output");

    std::string filter, fspec, arrow_id, oracle;
    double x0 = -1, x1 = 1, t0 = 0, t1 = 1, sigma = 0.2;
    int n = 65, levels = 1;
    bool implicit = false;
    std::string csv_path;

    auto* vops = app.add_subcommand("verify-operators", "check the operator catalog");
    vops->add_option("filter", filter, "key filter, '*' wildcards");
    auto* vsol = app.add_subcommand("verify-solutions", "check the solution catalog");
    vsol->add_option("filter", filter, "key filter, '*' wildcards");
    auto* der = app.add_subcommand("derive", "derive the determining system for f(vx)");
    der->add_option("nonlinearity", fspec, "expression in vx, e.g. '1/vx'")->required();
    auto* arr = app.add_subcommand("arrows", "verify solution transformation arrows");
    arr->add_option("id", arrow_id, "single arrow id");
    arr->add_flag("--all", "run every arrow (default when no id is given)");
    auto* red = app.add_subcommand("reduce", "symmetry reductions to ODEs");
    auto* sim = app.add_subcommand("simulate", "finite-difference run against an exact solution");
    sim->add_option("--oracle", oracle, "solution key, append :v for the filtration side")
        ->required();
    sim->add_option("--x0", x0);
    sim->add_option("--x1", x1);
    sim->add_option("--n", n, "grid nodes");
    sim->add_option("--t0", t0);
    sim->add_option("--t1", t1);
    sim->add_option("--sigma", sigma, "stability factor for the time step");
    sim->add_option("--levels", levels, ">= 3 runs a refinement study");
    sim->add_flag("--implicit", implicit, "backward Euler with Newton");
    sim->add_option("--csv", csv_path, "write the level table to this path");
    auto* cat = app.add_subcommand("catalog", "list operator, solution, and arrow keys");

    // allow the global flags to appear after the subcommand as well
    for (CLI::App* s : {vops, vsol, der, arr, red, sim, cat}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    fd_context* ctx = fd_context_create();
    fd_context_set_seed(ctx, opt.seed);
    fd_context_set_tolerance(ctx, opt.tolerance);
    fd_context_set_timestamps(ctx, opt.no_timestamps ? 0 : 1);

    fd_status st = FD_OK;
    char* json = nullptr;
    if (vops->parsed()) {
        st = fd_verify_operators(ctx, filter.c_str(), &json);
    } else if (vsol->parsed()) {
        st = fd_verify_solutions(ctx, filter.c_str(), &json);
    } else if (der->parsed()) {
        st = fd_derive(ctx, fspec.c_str(), &json);
    } else if (arr->parsed()) {
        st = fd_arrows(ctx, arrow_id.c_str(), &json);
    } else if (red->parsed()) {
        st = fd_reduce(ctx, &json);
    } else if (cat->parsed()) {
        st = fd_catalog(ctx, &json);
    } else if (sim->parsed()) {
        char* csv = nullptr;
        st = fd_simulate(ctx, oracle.c_str(), x0, x1, n, t0, t1, sigma, levels,
                         implicit ? 1 : 0, &json, &csv);
        if (csv != nullptr) {
            if (!csv_path.empty()) {
                std::ofstream out(csv_path, std::ios::binary);
                out << csv;
            } else if (opt.json_path.empty()) {
                std::fputs(csv, stdout);
                fd_free(csv);
                fd_free(json);
                fd_context_destroy(ctx);
                return (int)st;
            }
            fd_free(csv);
        }
    }
    int code = emit(opt, st, json, ctx);
    fd_context_destroy(ctx);
    return code;
}
