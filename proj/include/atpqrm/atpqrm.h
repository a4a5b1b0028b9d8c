#ifndef ATPQRM_H
#define ATPQRM_H

/* C interface to the anisotropic two-photon Rabi model solver.
 *
 * Every fallible call returns an atpqrm_status; results come back through
 * out-pointers. On failure atpqrm_last_error() holds a message for the
 * calling thread. Handles are opaque and must be released with their
 * matching _free function (passing NULL is allowed). */

#include <stddef.h>

#if defined(_WIN32)
#if defined(ATPQRM_BUILDING_LIBRARY)
#define ATPQRM_API __declspec(dllexport)
#else
#define ATPQRM_API __declspec(dllimport)
#endif
#else
#define ATPQRM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atpqrm_status {
  ATPQRM_OK = 0,
  ATPQRM_INVALID_ARGUMENT = 1,
  ATPQRM_COUPLING_AT_OR_ABOVE_CRITICAL = 2,
  ATPQRM_POLE_PROXIMITY = 3,
  ATPQRM_NOT_CONVERGED = 4,
  ATPQRM_NO_CROSSING = 5,
  ATPQRM_INSUFFICIENT_POINTS = 6,
  ATPQRM_EIGENSOLVER_NO_CONVERGENCE = 7,
  ATPQRM_DOMAIN_TOO_SMALL = 8,
  ATPQRM_AMBIGUOUS_PARITY = 9,
  ATPQRM_QUADRATURE_FAILURE = 10,
  ATPQRM_BUFFER_TOO_SMALL = 11,
  ATPQRM_INTERNAL = 99
} atpqrm_status;

ATPQRM_API const char* atpqrm_version(void);
ATPQRM_API const char* atpqrm_status_string(atpqrm_status s);
/* Message of the last failed call on this thread ("" if none). */
ATPQRM_API const char* atpqrm_last_error(void);

/* q is 0.25 or 0.75; parity is +1 or -1. */
typedef struct atpqrm_params {
  double delta;
  double r;
  double g;
  double q;
  int parity;
} atpqrm_params;

/* ---- model ---------------------------------------------------------- */

typedef struct atpqrm_frame {
  double beta_plus;
  double beta_minus;
  double theta;
  double tanh_theta;
  double cosh2_theta;
  double sinh2_theta;
  double r1;
  double r2;
  double g_c;
  double pole_spacing;
} atpqrm_frame;

ATPQRM_API atpqrm_status atpqrm_derive_frame(const atpqrm_params* p, atpqrm_frame* out);
ATPQRM_API double atpqrm_collapse_coupling(double r);
ATPQRM_API double atpqrm_critical_splitting(double q, double r);
ATPQRM_API atpqrm_status atpqrm_pole_energy(const atpqrm_params* p, long n, double* out);
ATPQRM_API atpqrm_status atpqrm_crossing_point(double q, double delta, double r, double* g0, double* e0,
                                               int* inside_physical_range);
ATPQRM_API atpqrm_status atpqrm_scaled_energy(const atpqrm_params* p, double energy, double* out);

/* ---- recurrence ----------------------------------------------------- */

typedef enum atpqrm_series_kind {
  ATPQRM_SERIES_RAW = 0,
  ATPQRM_SERIES_RESCALED = 1,
  ATPQRM_SERIES_COLLAPSE = 2
} atpqrm_series_kind;

typedef struct atpqrm_series atpqrm_series;

ATPQRM_API atpqrm_status atpqrm_series_run(atpqrm_series_kind kind, const atpqrm_params* p, double energy,
                                           long truncation, atpqrm_series** out);
ATPQRM_API void atpqrm_series_free(atpqrm_series* s);
ATPQRM_API size_t atpqrm_series_length(const atpqrm_series* s);
ATPQRM_API long atpqrm_series_n_star(const atpqrm_series* s);
/* first is e_n / Lambda_n (0 for the collapse kind), second is f_n / xi_n. */
ATPQRM_API atpqrm_status atpqrm_series_get(const atpqrm_series* s, size_t n, double* first, double* second);

/* a, b, c, d, d~, h, h~ in that order. */
ATPQRM_API atpqrm_status atpqrm_asymptotic_coefficients(const atpqrm_params* p, double out[7]);
ATPQRM_API atpqrm_status atpqrm_estimate_n_star(const atpqrm_params* p, double energy, long* out);

/* ---- G-functions ---------------------------------------------------- */

typedef struct atpqrm_g_options {
  long truncation;        /* 0: automatic */
  double tol;
  int extended_precision; /* long double accumulation */
  int naive_summation;
  int early_stop;
} atpqrm_g_options;

ATPQRM_API atpqrm_g_options atpqrm_g_options_default(void);

typedef struct atpqrm_g_result {
  double value;
  long truncation_used;
  double tail_estimate;
  int converged;
  double pole_distance;
  double sum_lambda;
  double sum_xi;
} atpqrm_g_result;

/* opt may be NULL. */
ATPQRM_API atpqrm_status atpqrm_eval_g(const atpqrm_params* p, double energy, const atpqrm_g_options* opt,
                                       atpqrm_g_result* out);
ATPQRM_API atpqrm_status atpqrm_eval_g_exceptional(const atpqrm_params* p, long m, const atpqrm_g_options* opt,
                                                   atpqrm_g_result* out);
ATPQRM_API atpqrm_status atpqrm_eval_f(double delta, double r, double q, long n, double g, double* out);
ATPQRM_API atpqrm_status atpqrm_eval_f_at_collapse(double delta, double r, double q, long n, double* out);

/* ---- spectrum ------------------------------------------------------- */

typedef struct atpqrm_level {
  double energy;
  double q;
  int parity;
  long pole_interval;
  int degenerate;
  int degenerate_with; /* partner parity, 0 if none */
} atpqrm_level;

typedef struct atpqrm_level_options {
  atpqrm_g_options g;
  double tol;
  int samples;
  int max_samples;
  double e_floor;
  int both_parities;
  double degenerate_tol;
} atpqrm_level_options;

ATPQRM_API atpqrm_level_options atpqrm_level_options_default(void);

typedef struct atpqrm_levelset atpqrm_levelset;

ATPQRM_API atpqrm_status atpqrm_find_levels(const atpqrm_params* p, double e_lo, double e_hi,
                                            const atpqrm_level_options* opt, atpqrm_levelset** out);
ATPQRM_API void atpqrm_levelset_free(atpqrm_levelset* s);
ATPQRM_API size_t atpqrm_levelset_count(const atpqrm_levelset* s);
ATPQRM_API atpqrm_status atpqrm_levelset_get(const atpqrm_levelset* s, size_t i, atpqrm_level* out);
ATPQRM_API size_t atpqrm_levelset_unresolved_count(const atpqrm_levelset* s);
ATPQRM_API size_t atpqrm_levelset_crowded_count(const atpqrm_levelset* s);

typedef struct atpqrm_degenerate_point {
  long n;
  double g;
  double energy;
  double q;
} atpqrm_degenerate_point;

/* Writes up to capacity points; *count receives the total found. Returns
 * ATPQRM_BUFFER_TOO_SMALL when it exceeds capacity. */
ATPQRM_API atpqrm_status atpqrm_find_degenerate_points(double delta, double r, double q, long n, double g_lo,
                                                       double g_hi, atpqrm_degenerate_point* buf,
                                                       size_t capacity, size_t* count);
ATPQRM_API atpqrm_status atpqrm_last_crossing(double delta, double r, double q, long n, double* g_max);

typedef struct atpqrm_exceptional_scan atpqrm_exceptional_scan;

/* Zeros of the exceptional G-function on pole line m over the grid
 * x = -log10(1 - g/g_c); p->g is ignored. */
ATPQRM_API atpqrm_status atpqrm_exceptional_scan_run(const atpqrm_params* p, long m, const double* x_grid,
                                                     size_t nx, const long* truncations, size_t nt,
                                                     int extended_precision, atpqrm_exceptional_scan** out);
ATPQRM_API void atpqrm_exceptional_scan_free(atpqrm_exceptional_scan* s);
ATPQRM_API int atpqrm_exceptional_scan_precision_floor(const atpqrm_exceptional_scan* s);
ATPQRM_API size_t atpqrm_exceptional_scan_truncations(const atpqrm_exceptional_scan* s);
ATPQRM_API size_t atpqrm_exceptional_scan_zero_count(const atpqrm_exceptional_scan* s, size_t t);
ATPQRM_API atpqrm_status atpqrm_exceptional_scan_zero(const atpqrm_exceptional_scan* s, size_t t, size_t j,
                                                      double* x, double* g, int* converged);
/* G values and convergence flags on the grid for truncation t; buffers hold nx entries. */
ATPQRM_API atpqrm_status atpqrm_exceptional_scan_values(const atpqrm_exceptional_scan* s, size_t t,
                                                        double* values, int* converged, size_t nx);

typedef struct atpqrm_spacing_fit {
  double mu;
  double mu0;
  double max_abs_residual;
  double mean_spacing;
} atpqrm_spacing_fit;

/* residuals may be NULL, otherwise it holds n entries. */
ATPQRM_API atpqrm_status atpqrm_fit_exponential_spacing(const double* zeros_g, size_t n, double g_c,
                                                        long first_index, atpqrm_spacing_fit* out,
                                                        double* residuals);

/* ---- exact diagonalization ------------------------------------------ */

typedef struct atpqrm_ed atpqrm_ed;

ATPQRM_API atpqrm_status atpqrm_ed_run(const atpqrm_params* p, size_t dim, size_t k_lowest, int vectors,
                                       atpqrm_ed** out);
/* Doubles the dimension from dim0 until the k lowest levels move by < tol. */
ATPQRM_API atpqrm_status atpqrm_ed_run_converged(const atpqrm_params* p, size_t k_lowest, size_t dim0,
                                                 double tol, size_t max_dim, atpqrm_ed** out);
ATPQRM_API void atpqrm_ed_free(atpqrm_ed* e);
ATPQRM_API size_t atpqrm_ed_count(const atpqrm_ed* e);
ATPQRM_API size_t atpqrm_ed_dim(const atpqrm_ed* e);
/* NaN unless produced by atpqrm_ed_run_converged. */
ATPQRM_API double atpqrm_ed_truncation_shift(const atpqrm_ed* e);
ATPQRM_API double atpqrm_ed_reliable_below_g(const atpqrm_ed* e);
ATPQRM_API atpqrm_status atpqrm_ed_eigenvalue(const atpqrm_ed* e, size_t i, double* energy, int* parity);
/* Interleaved basis of 2*dim entries: index 2j is |up,k0+2j>, 2j+1 is |down,k0+2j>. */
ATPQRM_API atpqrm_status atpqrm_ed_eigenvector(const atpqrm_ed* e, size_t i, double* buf, size_t capacity);
ATPQRM_API atpqrm_status atpqrm_parity_expectation(const double* v, size_t n, int* parity);

/* lower and upper hold n_max+1 entries. */
ATPQRM_API atpqrm_status atpqrm_rwa_spectrum(double delta, double g, long n_max, double q, double* lower,
                                             double* upper, double* lone);
ATPQRM_API atpqrm_status atpqrm_check_positivity(double r, size_t dim, double threshold, double* min_eigenvalue,
                                                 size_t* negatives_below_threshold);

/* ---- collapse point ------------------------------------------------- */

typedef enum atpqrm_region {
  ATPQRM_REGION_A = 0,
  ATPQRM_REGION_B = 1,
  ATPQRM_REGION_C = 2,
  ATPQRM_REGION_BOUNDARY = 3
} atpqrm_region;

typedef enum atpqrm_count_class {
  ATPQRM_COUNT_NONE = 0,
  ATPQRM_COUNT_FINITE = 1,
  ATPQRM_COUNT_INFINITE = 2
} atpqrm_count_class;

ATPQRM_API atpqrm_status atpqrm_collapse_mass(double x, double r, double* out);
ATPQRM_API atpqrm_status atpqrm_collapse_potential(double x, double delta, double r, double* out);
ATPQRM_API atpqrm_status atpqrm_collapse_y_of_x(double x, double alpha, double* out);
ATPQRM_API atpqrm_status atpqrm_collapse_x_of_y(double y, double alpha, double* out);
ATPQRM_API atpqrm_status atpqrm_collapse_v2(double y, double delta, double r, double kappa, double* out);

typedef struct atpqrm_tail {
  double gamma;
  double gamma_prime;
  atpqrm_region region;
  int boundary_of;
  atpqrm_count_class expected;
} atpqrm_tail;

ATPQRM_API atpqrm_status atpqrm_tail_coefficients(double delta, double r, double kappa, atpqrm_tail* out);

typedef struct atpqrm_faddeev {
  int divergent;
  double value;
  double error;
  double tail_constant;
  double y_max;
} atpqrm_faddeev;

ATPQRM_API atpqrm_status atpqrm_faddeev_i1(double delta, double r, double kappa, double y_max,
                                           atpqrm_faddeev* out);
ATPQRM_API atpqrm_status atpqrm_brownstein_i2(double delta, double r, double kappa, double* value,
                                              double* error);

typedef struct atpqrm_collapse_options {
  double L;
  double h;
  size_t k_states;
  double L_max;
  int auto_enlarge;
  double boundary_tolerance;
} atpqrm_collapse_options;

ATPQRM_API atpqrm_collapse_options atpqrm_collapse_options_default(void);

typedef struct atpqrm_bound_state {
  double kappa4;
  double energy;
  int parity;
  double boundary_weight;
  double gap;
  double h;
  double L;
  size_t points; /* length of the wavefunction on x_i = i h */
} atpqrm_bound_state;

typedef struct atpqrm_bound_diagnostics {
  size_t unresolved;
  double lowest_eigenvalue;
  double noise_floor;
  double L_used;
  double h;
  atpqrm_count_class count_class;
  atpqrm_region region;
} atpqrm_bound_diagnostics;

typedef struct atpqrm_nondegeneracy {
  int simple;
  double gap;
  double tolerance;
  double first_order_residual;
  int annihilated;
  int nondegenerate;
} atpqrm_nondegeneracy;

typedef struct atpqrm_bound_states atpqrm_bound_states;

ATPQRM_API atpqrm_status atpqrm_bound_states_solve(double delta, double r, const atpqrm_collapse_options* opt,
                                                   atpqrm_bound_states** out);
ATPQRM_API void atpqrm_bound_states_free(atpqrm_bound_states* s);
ATPQRM_API size_t atpqrm_bound_states_count(const atpqrm_bound_states* s);
/* -1/2 when no state is resolved. */
ATPQRM_API double atpqrm_bound_states_ground_energy(const atpqrm_bound_states* s);
ATPQRM_API atpqrm_status atpqrm_bound_states_get(const atpqrm_bound_states* s, size_t i, atpqrm_bound_state* out);
ATPQRM_API atpqrm_status atpqrm_bound_states_wavefunction(const atpqrm_bound_states* s, size_t i, double* buf,
                                                          size_t capacity);
ATPQRM_API atpqrm_status atpqrm_bound_states_diagnostics(const atpqrm_bound_states* s,
                                                         atpqrm_bound_diagnostics* out);
ATPQRM_API atpqrm_status atpqrm_bound_states_nondegeneracy(const atpqrm_bound_states* s, size_t i,
                                                           atpqrm_nondegeneracy* out);

/* kappa^4 (1-alpha) < P/(4 alpha) and the tail-attraction form
 * kappa^4 (1-alpha) < alpha P/4. */
ATPQRM_API atpqrm_status atpqrm_threshold_bound(double kappa4, double delta, double r, int* satisfied,
                                                int* attractive_tail);

#ifdef __cplusplus
}
#endif

#endif /* ATPQRM_H */
