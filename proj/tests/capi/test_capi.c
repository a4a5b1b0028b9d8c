/* Exercises the C interface from plain C: handles, status codes, buffers. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include <atpqrm/atpqrm.h>

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

#define NEAR(a, b, tol) EXPECT(fabs((a) - (b)) <= (tol))

static atpqrm_params make(double delta, double r, double g) {
  atpqrm_params p;
  p.delta = delta;
  p.r = r;
  p.g = g;
  p.q = 0.25;
  p.parity = 1;
  return p;
}

static void test_basics(void) {
  EXPECT(strlen(atpqrm_version()) > 0);
  EXPECT(strcmp(atpqrm_status_string(ATPQRM_OK), atpqrm_status_string(ATPQRM_POLE_PROXIMITY)) != 0);
  EXPECT(strlen(atpqrm_status_string((atpqrm_status)12345)) > 0);

  atpqrm_params p = make(0.5, 0.2, 0.2);
  atpqrm_frame f;
  EXPECT(atpqrm_derive_frame(&p, &f) == ATPQRM_OK);
  NEAR(f.beta_plus, 0.9707728879609277592, 1e-15);
  NEAR(f.beta_minus, 0.9871170143402452771, 1e-15);
  NEAR(atpqrm_collapse_coupling(0.25), 0.8, 1e-15);
  NEAR(atpqrm_critical_splitting(0.75, 0.25), 1.8, 1e-15);

  double e;
  EXPECT(atpqrm_pole_energy(&p, 0, &e) == ATPQRM_OK);
  NEAR(e, -0.020866782616775776, 1e-15);

  EXPECT(atpqrm_derive_frame(NULL, &f) == ATPQRM_INVALID_ARGUMENT);
  EXPECT(strlen(atpqrm_last_error()) > 0);
  p.q = 0.5;
  EXPECT(atpqrm_derive_frame(&p, &f) == ATPQRM_INVALID_ARGUMENT);
  p = make(0.5, 0.25, 0.9);
  EXPECT(atpqrm_derive_frame(&p, &f) == ATPQRM_COUPLING_AT_OR_ABOVE_CRITICAL);
  p = make(0.5, 0.2, 0.2);
  p.parity = 0;
  EXPECT(atpqrm_derive_frame(&p, &f) == ATPQRM_INVALID_ARGUMENT);

  double g0, e0;
  int inside;
  EXPECT(atpqrm_crossing_point(0.25, 0.5, 0.2, &g0, &e0, &inside) == ATPQRM_OK);
  NEAR(g0, 0.72168783648703220564, 1e-14);
  NEAR(e0, -0.29587585476806849182, 1e-13);
  EXPECT(inside == 1);
}

static void test_series_and_g(void) {
  atpqrm_params p = make(0.5, 0.2, 0.4);
  atpqrm_series* s = NULL;
  EXPECT(atpqrm_series_run(ATPQRM_SERIES_RESCALED, &p, 1.0, 20, &s) == ATPQRM_OK);
  EXPECT(atpqrm_series_length(s) == 21);
  double a, b;
  EXPECT(atpqrm_series_get(s, 0, &a, &b) == ATPQRM_OK);
  NEAR(b, 1.0, 0.0);
  EXPECT(atpqrm_series_get(s, 21, &a, &b) == ATPQRM_INVALID_ARGUMENT);
  atpqrm_series_free(s);
  atpqrm_series_free(NULL);

  EXPECT(atpqrm_series_run(ATPQRM_SERIES_COLLAPSE, &p, 0.0, 10, &s) == ATPQRM_OK);
  EXPECT(atpqrm_series_get(s, 3, &a, &b) == ATPQRM_OK);
  NEAR(b, 1.0 / 48.0, 1e-16);
  atpqrm_series_free(s);

  atpqrm_g_options o = atpqrm_g_options_default();
  atpqrm_g_result r;
  EXPECT(atpqrm_eval_g(&p, 1.0, &o, &r) == ATPQRM_OK);
  EXPECT(r.converged);
  NEAR(r.value, r.sum_lambda + r.sum_xi, 1e-12 * fabs(r.value) + 1e-15);
  EXPECT(atpqrm_eval_g(&p, 1.0, NULL, &r) == ATPQRM_OK);

  double pole;
  atpqrm_pole_energy(&p, 2, &pole);
  s = NULL;
  EXPECT(atpqrm_series_run(ATPQRM_SERIES_RESCALED, &p, pole, 10, &s) == ATPQRM_POLE_PROXIMITY);
  EXPECT(s == NULL);
  EXPECT(atpqrm_eval_g(&p, pole, &o, &r) == ATPQRM_POLE_PROXIMITY);

  double fc;
  EXPECT(atpqrm_eval_f_at_collapse(0.6, 0.25, 0.25, 4, &fc) == ATPQRM_OK);
  NEAR(fc, 0.0, 1e-12);
  double coeff[7];
  EXPECT(atpqrm_asymptotic_coefficients(&p, coeff) == ATPQRM_OK);
}

static void test_spectrum(void) {
  atpqrm_params p = make(0.5, 0.2, 0.2);
  atpqrm_level_options lo = atpqrm_level_options_default();
  atpqrm_levelset* ls = NULL;
  EXPECT(atpqrm_find_levels(&p, -1.0, 8.0, &lo, &ls) == ATPQRM_OK);
  EXPECT(atpqrm_levelset_count(ls) == 9);
  atpqrm_level lv;
  EXPECT(atpqrm_levelset_get(ls, 0, &lv) == ATPQRM_OK);
  NEAR(lv.energy, -0.25134388709114, 1e-12);
  EXPECT(atpqrm_levelset_crowded_count(ls) == 3);
  EXPECT(atpqrm_levelset_unresolved_count(ls) == 0);
  EXPECT(atpqrm_levelset_get(ls, 9, &lv) == ATPQRM_INVALID_ARGUMENT);
  atpqrm_levelset_free(ls);

  atpqrm_degenerate_point pts[8];
  size_t count = 0;
  const double gc = atpqrm_collapse_coupling(0.25);
  EXPECT(atpqrm_find_degenerate_points(0.5, 0.25, 0.25, 2, 1e-6 * gc, gc * (1 - 1e-9), pts, 8, &count) ==
         ATPQRM_OK);
  EXPECT(count >= 1);
  if (count >= 1) {
    size_t again = 0;
    EXPECT(atpqrm_find_degenerate_points(0.5, 0.25, 0.25, 2, 1e-6 * gc, gc * (1 - 1e-9), pts, 0, &again) ==
           (count > 0 ? ATPQRM_BUFFER_TOO_SMALL : ATPQRM_OK));
    EXPECT(again == count);
  }
  double gmax;
  EXPECT(atpqrm_last_crossing(0.7, 0.25, 0.25, 0, &gmax) == ATPQRM_NO_CROSSING);

  double zs[3] = {0.8 * (1 - exp(-0.8)), 0.8 * (1 - exp(-1.7)), 0.8 * (1 - exp(-2.6))};
  atpqrm_spacing_fit fit;
  double res[3];
  EXPECT(atpqrm_fit_exponential_spacing(zs, 3, 0.8, 1, &fit, res) == ATPQRM_OK);
  NEAR(fit.mu, 0.9, 1e-10);
  NEAR(fit.mu0, 0.1, 1e-9);
  EXPECT(atpqrm_fit_exponential_spacing(zs, 2, 0.8, 1, &fit, NULL) == ATPQRM_INSUFFICIENT_POINTS);

  atpqrm_params pe = make(5.0, 0.25, 0.0);
  double grid[40];
  for (int i = 0; i < 40; ++i) grid[i] = 0.1 * (i + 1);
  long ladder[1] = {20000};
  atpqrm_exceptional_scan* sc = NULL;
  EXPECT(atpqrm_exceptional_scan_run(&pe, 0, grid, 40, ladder, 1, 0, &sc) == ATPQRM_OK);
  EXPECT(atpqrm_exceptional_scan_truncations(sc) == 1);
  EXPECT(atpqrm_exceptional_scan_zero_count(sc, 0) == 1);
  double x, g;
  int conv;
  EXPECT(atpqrm_exceptional_scan_zero(sc, 0, 0, &x, &g, &conv) == ATPQRM_OK);
  NEAR(x, 2.58149641, 1e-7);
  double vals[40];
  int flags[40];
  EXPECT(atpqrm_exceptional_scan_values(sc, 0, vals, flags, 40) == ATPQRM_OK);
  EXPECT(atpqrm_exceptional_scan_values(sc, 0, vals, flags, 39) == ATPQRM_BUFFER_TOO_SMALL);
  EXPECT(atpqrm_exceptional_scan_precision_floor(sc) == 0);
  atpqrm_exceptional_scan_free(sc);
}

static void test_ed(void) {
  atpqrm_params p = make(0.5, 0.2, 0.2);
  atpqrm_ed* ed = NULL;
  EXPECT(atpqrm_ed_run(&p, 400, 4, 1, &ed) == ATPQRM_OK);
  EXPECT(atpqrm_ed_count(ed) == 4);
  EXPECT(atpqrm_ed_dim(ed) == 400);
  EXPECT(isnan(atpqrm_ed_truncation_shift(ed)));
  double e;
  int par;
  EXPECT(atpqrm_ed_eigenvalue(ed, 0, &e, &par) == ATPQRM_OK);
  NEAR(e, -0.25134388709114, 1e-12);
  double* v = malloc(sizeof(double) * 800);
  EXPECT(atpqrm_ed_eigenvector(ed, 0, v, 800) == ATPQRM_OK);
  int p2 = 0;
  EXPECT(atpqrm_parity_expectation(v, 800, &p2) == ATPQRM_OK);
  EXPECT(p2 == par);
  EXPECT(atpqrm_ed_eigenvector(ed, 0, v, 799) == ATPQRM_BUFFER_TOO_SMALL);
  v[0] = v[1] = sqrt(0.5);
  for (int i = 2; i < 800; ++i) v[i] = 0.0;
  EXPECT(atpqrm_parity_expectation(v, 800, &p2) == ATPQRM_AMBIGUOUS_PARITY);
  free(v);
  atpqrm_ed_free(ed);

  double lower[11], upper[11], lone;
  EXPECT(atpqrm_rwa_spectrum(1.0, 1.0, 10, 0.25, lower, upper, &lone) == ATPQRM_OK);
  NEAR(lower[3], -0.5, 1e-12);
  NEAR(upper[1], 6.5, 1e-12);

  double mn;
  size_t neg;
  EXPECT(atpqrm_check_positivity(0.5, 200, 1e-10, &mn, &neg) == ATPQRM_OK);
  EXPECT(mn > 0.0);
  EXPECT(neg == 0);
}

static void test_collapse(void) {
  double m;
  EXPECT(atpqrm_collapse_mass(0.0, 0.25, &m) == ATPQRM_OK);
  NEAR(m, 1.0, 0.0);
  EXPECT(atpqrm_collapse_mass(0.0, 0.0, &m) == ATPQRM_INVALID_ARGUMENT);
  atpqrm_tail t;
  EXPECT(atpqrm_tail_coefficients(1.0, 0.25, 0.0, &t) == ATPQRM_OK);
  EXPECT(t.region == ATPQRM_REGION_B);
  EXPECT(t.expected == ATPQRM_COUNT_FINITE);
  double i2, err;
  EXPECT(atpqrm_brownstein_i2(0.5, 0.25, 0.0, &i2, &err) == ATPQRM_OK);
  NEAR(i2, 0.0085027205, 1e-9);
  atpqrm_faddeev fd;
  EXPECT(atpqrm_faddeev_i1(2.5, 0.25, 0.0, 1e6, &fd) == ATPQRM_OK);
  EXPECT(fd.divergent);

  atpqrm_collapse_options o = atpqrm_collapse_options_default();
  o.L = 100;
  atpqrm_bound_states* bs = NULL;
  EXPECT(atpqrm_bound_states_solve(3.0, 0.25, &o, &bs) == ATPQRM_OK);
  EXPECT(atpqrm_bound_states_count(bs) >= 2);
  atpqrm_bound_state st;
  EXPECT(atpqrm_bound_states_get(bs, 0, &st) == ATPQRM_OK);
  NEAR(atpqrm_bound_states_ground_energy(bs), st.energy, 0.0);
  double* psi = malloc(sizeof(double) * st.points);
  EXPECT(atpqrm_bound_states_wavefunction(bs, 0, psi, st.points) == ATPQRM_OK);
  EXPECT(psi[0] != 0.0);
  EXPECT(atpqrm_bound_states_wavefunction(bs, 0, psi, st.points - 1) == ATPQRM_BUFFER_TOO_SMALL);
  free(psi);
  atpqrm_bound_diagnostics d;
  EXPECT(atpqrm_bound_states_diagnostics(bs, &d) == ATPQRM_OK);
  EXPECT(d.region == ATPQRM_REGION_C);
  atpqrm_nondegeneracy nd;
  EXPECT(atpqrm_bound_states_nondegeneracy(bs, 0, &nd) == ATPQRM_OK);
  EXPECT(nd.nondegenerate);
  atpqrm_bound_states_free(bs);

  o.L = 3.0;
  o.auto_enlarge = 0;
  bs = NULL;
  EXPECT(atpqrm_bound_states_solve(3.0, 0.25, &o, &bs) == ATPQRM_DOMAIN_TOO_SMALL);
  EXPECT(bs == NULL);

  int sat, att;
  EXPECT(atpqrm_threshold_bound(0.01, 3.0, 0.25, &sat, &att) == ATPQRM_OK);
  EXPECT(sat && att);
}

int main(void) {
  test_basics();
  test_series_and_g();
  test_spectrum();
  test_ed();
  test_collapse();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
