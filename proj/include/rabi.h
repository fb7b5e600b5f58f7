/* C API for the Rabi spectrum library.
 *
 * Everything is plain C: opaque handles, POD rows, integer status codes.
 * All functions return rabi_status; results come back through out-pointers.
 * Tables are heap-allocated by the library and released with the matching
 * _free call. Passing NULL where a pointer is required yields
 * RABI_ERR_BAD_ARG, never a crash.
 *
 * Energy convention: x is the shifted energy x = E + g^2; rows carry both.
 */
#ifndef RABI_H
#define RABI_H

#include <stddef.h>

#if defined _WIN32 || defined __CYGWIN__
#define RABI_API __declspec(dllexport)
#else
#define RABI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rabi_status {
  RABI_OK = 0,
  RABI_ERR_DOMAIN = 1,       /* parameter outside mathematical domain */
  RABI_ERR_POLE = 2,         /* evaluation at an integer-baseline pole */
  RABI_ERR_NONCONVERGED = 3, /* truncation or series cap exhausted */
  RABI_ERR_UNDERFLOW = 4,    /* rescaling collapsed to zero */
  RABI_ERR_KUMMER_POLE = 5,  /* hypergeometric parameter at a non-positive integer */
  RABI_ERR_LOST_BRACKET = 6, /* root bracket hit a pole mid-refinement */
  RABI_ERR_BAD_ARG = 7       /* malformed request */
} rabi_status;

/* Enumerations shared with the row structs. */
enum { RABI_PARITY_SYM = 0, RABI_PARITY_ANTI = 1, RABI_PARITY_BOTH = 2 };
enum { RABI_METHOD_DIAG = 0, RABI_METHOD_MOROZ = 1, RABI_METHOD_BRAAK = 2, RABI_METHOD_BIRKHOFF = 3, RABI_METHOD_ALL = 4 };
enum { RABI_BRANCH_PLUS = 0, RABI_BRANCH_MINUS = 1 };
enum { RABI_FUNC_F0 = 0, RABI_FUNC_GPLUS = 1, RABI_FUNC_GMINUS = 2, RABI_FUNC_BN = 3 };

/* Row flag bits. */
#define RABI_FLAG_UNVERIFIED 1u
#define RABI_FLAG_SPURIOUS 2u
#define RABI_FLAG_SEPARATRIX 4u

typedef struct rabi_params {
  double g;     /* coupling, >= 0 (> 0 for every method except diag) */
  double delta; /* half level splitting; negative swaps the parity towers */
} rabi_params;

typedef struct rabi_level {
  double x;               /* shifted energy E + g^2 */
  double energy;          /* E = x - g^2 */
  double gauge_a;         /* signed baseline distance (branch convention) */
  double oracle_residual; /* distance to nearest oracle level of same parity */
  int k;                  /* nearest-baseline quantum number */
  int solution_class;     /* 1..4 */
  int parity;             /* RABI_PARITY_SYM / RABI_PARITY_ANTI */
  int method;             /* RABI_METHOD_* of the producing method */
  unsigned flags;         /* RABI_FLAG_* bits */
} rabi_level;

typedef struct rabi_table rabi_table; /* opaque list of rabi_level */

RABI_API size_t rabi_table_size(const rabi_table* t);
RABI_API rabi_status rabi_table_get(const rabi_table* t, size_t i, rabi_level* out);
RABI_API void rabi_table_free(rabi_table* t);

/* ---- spectrum ---------------------------------------------------------- */

typedef struct rabi_spectrum_opts {
  int method;      /* RABI_METHOD_* (ALL = every method) */
  int parity;      /* RABI_PARITY_* selection */
  double x_min, x_max;
  int n;           /* per-method truncation; 0 = default */
  int k;           /* birkhoff index; meaningful when has_choice */
  int branch;      /* RABI_BRANCH_* */
  int has_choice;  /* 0: birkhoff defaults to k=0 and k=1 on the plus branch */
  double grid_step;
  double cross_tol;
} rabi_spectrum_opts;

RABI_API void rabi_spectrum_opts_init(rabi_spectrum_opts* opts);

/* Eigenvalue table over [x_min, x_max]; non-diag methods carry oracle
 * cross-check residuals, and rejected non-physical roots appear flagged
 * RABI_FLAG_SPURIOUS rather than being dropped. */
RABI_API rabi_status rabi_spectrum(rabi_params params, const rabi_spectrum_opts* opts,
                                   rabi_table** out);

/* Oracle alone: lowest `count` levels of one parity block.
 * n_trunc = 0 selects the doubling-certified default. */
RABI_API rabi_status rabi_oracle_spectrum(rabi_params params, int parity, int count, int n_trunc,
                                          rabi_table** out);

/* ---- pointwise evaluation --------------------------------------------- */

/* Value of one transcendental function at x. k/branch only read for
 * RABI_FUNC_BN. n = 0 selects the per-function default truncation. */
RABI_API rabi_status rabi_eval(rabi_params params, int function, double x, int n, int k,
                               int branch, double* out);

/* ---- classification ---------------------------------------------------- */

typedef struct rabi_class_info {
  int k;              /* nearest baseline */
  double gauge_a;     /* branch-signed distance to that baseline */
  int solution_class; /* 1..4 */
  int parity;         /* implied by (branch, k) */
  int separatrix;     /* 1 when |x - k| = 0.5 within tolerance */
} rabi_class_info;

RABI_API rabi_status rabi_classify(rabi_params params, double x, int branch,
                                   rabi_class_info* out);

/* ---- eigenfunction verification ---------------------------------------- */

/* Reflection self-consistency residual of the closed-form eigenfunction pair
 * at x under (k, branch); z_samples may be NULL to use {+-0.25, +-0.5, +-1}. */
RABI_API rabi_status rabi_verify(rabi_params params, double x, int k, int branch,
                                 const double* z_samples, size_t n_samples, double* residual);

/* ---- sweep -------------------------------------------------------------- */

typedef struct rabi_sweep_row {
  double g;
  double x;
  int parity;
  int k;
  double gauge_a;
} rabi_sweep_row;

typedef struct rabi_crossing {
  double g_lo, g_hi;
  int k;
  int parity; /* of the flipping level; unspecified when paired */
  int paired; /* 1 = opposite-parity degenerate crossing */
} rabi_crossing;

typedef struct rabi_sweep rabi_sweep; /* opaque */

RABI_API rabi_status rabi_sweep_run(double g_min, double g_max, int steps, double delta,
                                    int levels, double crossing_tol, rabi_sweep** out);
RABI_API size_t rabi_sweep_rows(const rabi_sweep* s);
RABI_API rabi_status rabi_sweep_row_get(const rabi_sweep* s, size_t i, rabi_sweep_row* out);
RABI_API size_t rabi_sweep_crossings(const rabi_sweep* s);
RABI_API rabi_status rabi_sweep_crossing_get(const rabi_sweep* s, size_t i, rabi_crossing* out);
RABI_API void rabi_sweep_free(rabi_sweep* s);

/* ---- misc --------------------------------------------------------------- */

RABI_API const char* rabi_status_str(rabi_status s);
RABI_API const char* rabi_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RABI_H */
