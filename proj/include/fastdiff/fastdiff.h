#ifndef FASTDIFF_H
#define FASTDIFF_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FD_OK = 0,      /* every requested check passed */
    FD_FAIL = 1,    /* checks ran, at least one failed */
    FD_USAGE = 2,   /* bad key, filter, or argument */
    FD_RUNTIME = 3  /* evaluation failure (pole, positivity, divergence) */
} fd_status;

typedef struct fd_context fd_context;

fd_context* fd_context_create(void);
void fd_context_destroy(fd_context* ctx);

void fd_context_set_seed(fd_context* ctx, unsigned long long seed);
void fd_context_set_tolerance(fd_context* ctx, double tolerance);
void fd_context_set_timestamps(fd_context* ctx, int enabled);

/* message for the most recent non-FD_OK return; empty string if none */
const char* fd_last_error(const fd_context* ctx);

/*
 * Every function below writes a malloc'd NUL-terminated string to its out
 * parameter (JSON unless noted); release it with fd_free. On FD_USAGE or
 * FD_RUNTIME the out string may be NULL and fd_last_error describes the
 * problem. `filter` supports '*' wildcards; NULL or "" selects everything.
 */

/* conditional-invariance checks over the operator catalog */
fd_status fd_verify_operators(fd_context* ctx, const char* filter, char** json_out);

/* residual checks over the exact-solution catalog */
fd_status fd_verify_solutions(fd_context* ctx, const char* filter, char** json_out);

/* determining system for v_t = f(v_x) v_xx; f_spec is an expression in vx */
fd_status fd_derive(fd_context* ctx, const char* f_spec, char** json_out);

/* transformation arrows between catalog solutions; id NULL or "" runs all */
fd_status fd_arrows(fd_context* ctx, const char* id, char** json_out);

/* symmetry reductions to ordinary differential equations, with profile checks */
fd_status fd_reduce(fd_context* ctx, char** json_out);

/* catalog keys: operators, solutions, arrows */
fd_status fd_catalog(fd_context* ctx, char** json_out);

/*
 * Finite-difference run against the exact solution named by oracle_key
 * (append ":v" for the filtration side). levels >= 3 performs a grid
 * refinement study, otherwise a single run. implicit != 0 selects backward
 * Euler with Newton. Either out pointer may be NULL; csv_out receives
 * "level,h,dt,max_err,l2_err,order" rows.
 */
fd_status fd_simulate(fd_context* ctx, const char* oracle_key, double x0, double x1, int n,
                      double t0, double t1, double sigma, int levels, int implicit,
                      char** json_out, char** csv_out);

void fd_free(char* p);

#ifdef __cplusplus
}
#endif

#endif /* FASTDIFF_H */
