#include "atpqrm/atpqrm.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/collapse.hpp"
#include "core/fock_ed.hpp"
#include "core/gfunction.hpp"
#include "core/model.hpp"
#include "core/recurrence.hpp"
#include "core/spectrum.hpp"

struct atpqrm_series {
  atpqrm::CoefficientSeries s;
};
struct atpqrm_levelset {
  atpqrm::LevelSet s;
};
struct atpqrm_exceptional_scan {
  atpqrm::ExceptionalScan s;
  std::size_t nx = 0;
};
struct atpqrm_ed {
  atpqrm::EDResult s;
};
struct atpqrm_bound_states {
  atpqrm::BoundStateSet s;
  double delta = 0.0;
  double r = 0.0;
};

namespace {

thread_local std::string last_error;

atpqrm_status fail(atpqrm_status code, const char* what) {
  last_error = what;
  return code;
}

template <typename F>
atpqrm_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return ATPQRM_OK;
  } catch (const atpqrm::Error& e) {
    return fail(static_cast<atpqrm_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ATPQRM_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ATPQRM_INTERNAL, e.what());
  } catch (...) {
    return fail(ATPQRM_INTERNAL, "unknown failure");
  }
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr) throw atpqrm::Error(atpqrm::ErrorCode::invalid_argument, std::string(name) + " is NULL");
}

atpqrm::Parity parity_of(int p) {
  if (p == 1) return atpqrm::Parity::even;
  if (p == -1) return atpqrm::Parity::odd;
  throw atpqrm::Error(atpqrm::ErrorCode::invalid_argument, "parity must be +1 or -1");
}

atpqrm::ModelParams convert(const atpqrm_params* p) {
  need(p, "params");
  atpqrm::ModelParams m;
  m.delta = p->delta;
  m.r = p->r;
  m.g = p->g;
  m.q = atpqrm::bargmann_from_value(p->q);
  m.parity = parity_of(p->parity);
  return m;
}

atpqrm::GOptions convert(const atpqrm_g_options* o) {
  atpqrm::GOptions g;
  if (o == nullptr) return g;
  g.truncation = o->truncation;
  g.tol = o->tol;
  g.precision = o->extended_precision ? atpqrm::Precision::extended : atpqrm::Precision::standard;
  g.summation = o->naive_summation ? atpqrm::Summation::naive : atpqrm::Summation::compensated;
  g.early_stop = o->early_stop != 0;
  return g;
}

void fill(const atpqrm::GEvaluation& e, atpqrm_g_result* out) {
  out->value = e.value;
  out->truncation_used = e.truncation_used;
  out->tail_estimate = e.tail_estimate;
  out->converged = e.converged ? 1 : 0;
  out->pole_distance = e.pole_distance;
  out->sum_lambda = e.sum_lambda;
  out->sum_xi = e.sum_xi;
}

void check_index(std::size_t i, std::size_t n) {
  if (i >= n) throw atpqrm::Error(atpqrm::ErrorCode::invalid_argument, "index out of range");
}

void check_capacity(std::size_t need_n, std::size_t capacity) {
  if (capacity < need_n)
    throw atpqrm::Error(static_cast<atpqrm::ErrorCode>(ATPQRM_BUFFER_TOO_SMALL),
                        "buffer needs " + std::to_string(need_n) + " entries");
}

void require_positive_r(double r) {
  atpqrm::require(std::isfinite(r) && r > 0.0, "collapse quantities need r > 0");
}

atpqrm_region region_of(atpqrm::Region r) {
  switch (r) {
    case atpqrm::Region::A: return ATPQRM_REGION_A;
    case atpqrm::Region::B: return ATPQRM_REGION_B;
    case atpqrm::Region::C: return ATPQRM_REGION_C;
    case atpqrm::Region::boundary: break;
  }
  return ATPQRM_REGION_BOUNDARY;
}

atpqrm_count_class class_of(atpqrm::CountClass c) {
  switch (c) {
    case atpqrm::CountClass::none: return ATPQRM_COUNT_NONE;
    case atpqrm::CountClass::finite: return ATPQRM_COUNT_FINITE;
    case atpqrm::CountClass::infinite: break;
  }
  return ATPQRM_COUNT_INFINITE;
}

}  // namespace

extern "C" {

const char* atpqrm_version(void) { return ATPQRM_VERSION_STRING; }

const char* atpqrm_status_string(atpqrm_status s) {
  switch (s) {
    case ATPQRM_OK: return "ok";
    case ATPQRM_INVALID_ARGUMENT: return "invalid argument";
    case ATPQRM_COUPLING_AT_OR_ABOVE_CRITICAL: return "coupling at or above critical";
    case ATPQRM_POLE_PROXIMITY: return "pole proximity";
    case ATPQRM_NOT_CONVERGED: return "not converged";
    case ATPQRM_NO_CROSSING: return "no crossing";
    case ATPQRM_INSUFFICIENT_POINTS: return "insufficient points";
    case ATPQRM_EIGENSOLVER_NO_CONVERGENCE: return "eigensolver did not converge";
    case ATPQRM_DOMAIN_TOO_SMALL: return "domain too small";
    case ATPQRM_AMBIGUOUS_PARITY: return "ambiguous parity";
    case ATPQRM_QUADRATURE_FAILURE: return "quadrature failure";
    case ATPQRM_BUFFER_TOO_SMALL: return "buffer too small";
    case ATPQRM_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* atpqrm_last_error(void) { return last_error.c_str(); }

/* model */

atpqrm_status atpqrm_derive_frame(const atpqrm_params* p, atpqrm_frame* out) {
  return guarded([&] {
    need(out, "out");
    const auto f = atpqrm::derive_frame(convert(p));
    *out = {f.beta_plus, f.beta_minus, f.theta, f.tanh_theta, f.cosh2_theta, f.sinh2_theta,
            f.r1,        f.r2,         f.g_c,   f.pole_spacing};
  });
}

double atpqrm_collapse_coupling(double r) { return atpqrm::collapse_coupling(r); }

double atpqrm_critical_splitting(double q, double r) { return 4.0 * q * (1.0 - r) / (1.0 + r); }

atpqrm_status atpqrm_pole_energy(const atpqrm_params* p, long n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::pole_energy(n, convert(p));
  });
}

atpqrm_status atpqrm_crossing_point(double q, double delta, double r, double* g0, double* e0,
                                    int* inside_physical_range) {
  return guarded([&] {
    const auto c = atpqrm::crossing_point(atpqrm::bargmann_from_value(q), delta, r);
    if (g0) *g0 = c.g0;
    if (e0) *e0 = c.e0;
    if (inside_physical_range) *inside_physical_range = c.inside_physical_range ? 1 : 0;
  });
}

atpqrm_status atpqrm_scaled_energy(const atpqrm_params* p, double energy, double* out) {
  return guarded([&] {
    need(out, "out");
    const auto m = convert(p);
    *out = atpqrm::scaled_energy(energy, m.q, atpqrm::derive_frame(m));
  });
}

/* recurrence */

atpqrm_status atpqrm_series_run(atpqrm_series_kind kind, const atpqrm_params* p, double energy, long truncation,
                                atpqrm_series** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<atpqrm_series>();
    switch (kind) {
      case ATPQRM_SERIES_RAW: h->s = atpqrm::run_raw(convert(p), energy, truncation); break;
      case ATPQRM_SERIES_RESCALED: h->s = atpqrm::run_rescaled(convert(p), energy, truncation); break;
      case ATPQRM_SERIES_COLLAPSE: {
        const auto q = p ? atpqrm::bargmann_from_value(p->q) : atpqrm::Bargmann::quarter;
        h->s = atpqrm::collapse_coefficients(truncation, q);
        break;
      }
      default: atpqrm::require(false, "unknown series kind");
    }
    *out = h.release();
  });
}

void atpqrm_series_free(atpqrm_series* s) { delete s; }

size_t atpqrm_series_length(const atpqrm_series* s) { return s ? s->s.stored() : 0; }

long atpqrm_series_n_star(const atpqrm_series* s) { return s ? s->s.n_star_estimate : 0; }

atpqrm_status atpqrm_series_get(const atpqrm_series* s, size_t n, double* first, double* second) {
  return guarded([&] {
    need(s, "series");
    check_index(n, s->s.stored());
    if (first) *first = s->s.first.empty() ? 0.0 : s->s.first[n];
    if (second) *second = s->s.second[n];
  });
}

atpqrm_status atpqrm_asymptotic_coefficients(const atpqrm_params* p, double out[7]) {
  return guarded([&] {
    need(out, "out");
    const auto a = atpqrm::asymptotic_coefficients(convert(p));
    const double v[7] = {a.a, a.b, a.c, a.d, a.dt, a.h, a.ht};
    std::copy(v, v + 7, out);
  });
}

atpqrm_status atpqrm_estimate_n_star(const atpqrm_params* p, double energy, long* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::estimate_n_star(convert(p), energy);
  });
}

/* G-functions */

atpqrm_g_options atpqrm_g_options_default(void) {
  const atpqrm::GOptions d;
  return {d.truncation, d.tol, d.precision == atpqrm::Precision::extended ? 1 : 0,
          d.summation == atpqrm::Summation::naive ? 1 : 0, d.early_stop ? 1 : 0};
}

atpqrm_status atpqrm_eval_g(const atpqrm_params* p, double energy, const atpqrm_g_options* opt,
                            atpqrm_g_result* out) {
  return guarded([&] {
    need(out, "out");
    fill(atpqrm::eval_g(convert(p), energy, convert(opt)), out);
  });
}

atpqrm_status atpqrm_eval_g_exceptional(const atpqrm_params* p, long m, const atpqrm_g_options* opt,
                                        atpqrm_g_result* out) {
  return guarded([&] {
    need(out, "out");
    fill(atpqrm::eval_g_exceptional(convert(p), m, convert(opt)), out);
  });
}

atpqrm_status atpqrm_eval_f(double delta, double r, double q, long n, double g, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::eval_f(delta, r, atpqrm::bargmann_from_value(q), n, g);
  });
}

atpqrm_status atpqrm_eval_f_at_collapse(double delta, double r, double q, long n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::eval_f_at_collapse(delta, r, atpqrm::bargmann_from_value(q), n);
  });
}

/* spectrum */

atpqrm_level_options atpqrm_level_options_default(void) {
  const atpqrm::LevelOptions d;
  return {atpqrm_g_options_default(), d.tol,           d.samples, d.max_samples,
          d.e_floor,                  d.both_parities ? 1 : 0, d.degenerate_tol};
}

atpqrm_status atpqrm_find_levels(const atpqrm_params* p, double e_lo, double e_hi, const atpqrm_level_options* opt,
                                 atpqrm_levelset** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    atpqrm::LevelOptions o;
    if (opt) {
      o.g = convert(&opt->g);
      o.tol = opt->tol;
      o.samples = opt->samples;
      o.max_samples = opt->max_samples;
      o.e_floor = opt->e_floor;
      o.both_parities = opt->both_parities != 0;
      o.degenerate_tol = opt->degenerate_tol;
    }
    auto h = std::make_unique<atpqrm_levelset>();
    h->s = atpqrm::find_levels(convert(p), e_lo, e_hi, o);
    *out = h.release();
  });
}

void atpqrm_levelset_free(atpqrm_levelset* s) { delete s; }

size_t atpqrm_levelset_count(const atpqrm_levelset* s) { return s ? s->s.levels.size() : 0; }

atpqrm_status atpqrm_levelset_get(const atpqrm_levelset* s, size_t i, atpqrm_level* out) {
  return guarded([&] {
    need(s, "levelset");
    need(out, "out");
    check_index(i, s->s.levels.size());
    const auto& l = s->s.levels[i];
    out->energy = l.energy;
    out->q = atpqrm::value(l.q);
    out->parity = atpqrm::sign(l.parity);
    out->pole_interval = l.pole_interval;
    out->degenerate = l.degenerate ? 1 : 0;
    out->degenerate_with = l.degenerate_with ? atpqrm::sign(*l.degenerate_with) : 0;
  });
}

size_t atpqrm_levelset_unresolved_count(const atpqrm_levelset* s) {
  return s ? s->s.diagnostics.unresolved_intervals.size() : 0;
}

size_t atpqrm_levelset_crowded_count(const atpqrm_levelset* s) {
  return s ? s->s.diagnostics.crowded_intervals.size() : 0;
}

atpqrm_status atpqrm_find_degenerate_points(double delta, double r, double q, long n, double g_lo, double g_hi,
                                            atpqrm_degenerate_point* buf, size_t capacity, size_t* count) {
  return guarded([&] {
    need(count, "count");
    const auto pts = atpqrm::find_degenerate_points(delta, r, atpqrm::bargmann_from_value(q), n, g_lo, g_hi);
    *count = pts.size();
    if (capacity > 0) need(buf, "buf");
    for (std::size_t i = 0; i < std::min(capacity, pts.size()); ++i)
      buf[i] = {pts[i].n, pts[i].g, pts[i].energy, atpqrm::value(pts[i].q)};
    check_capacity(pts.size(), capacity);
  });
}

atpqrm_status atpqrm_last_crossing(double delta, double r, double q, long n, double* g_max) {
  return guarded([&] {
    need(g_max, "g_max");
    *g_max = atpqrm::last_crossing(delta, r, atpqrm::bargmann_from_value(q), n);
  });
}

atpqrm_status atpqrm_exceptional_scan_run(const atpqrm_params* p, long m, const double* x_grid, size_t nx,
                                          const long* truncations, size_t nt, int extended_precision,
                                          atpqrm_exceptional_scan** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    need(x_grid, "x_grid");
    need(truncations, "truncations");
    atpqrm::ExceptionalScanOptions o;
    o.x_grid.assign(x_grid, x_grid + nx);
    o.truncations.assign(truncations, truncations + nt);
    o.precision = extended_precision ? atpqrm::Precision::extended : atpqrm::Precision::standard;
    auto h = std::make_unique<atpqrm_exceptional_scan>();
    h->s = atpqrm::count_bound_states_via_exceptional(convert(p), m, o);
    h->nx = nx;
    *out = h.release();
  });
}

void atpqrm_exceptional_scan_free(atpqrm_exceptional_scan* s) { delete s; }

int atpqrm_exceptional_scan_precision_floor(const atpqrm_exceptional_scan* s) {
  return s && s->s.precision_floor ? 1 : 0;
}

size_t atpqrm_exceptional_scan_truncations(const atpqrm_exceptional_scan* s) {
  return s ? s->s.per_truncation.size() : 0;
}

size_t atpqrm_exceptional_scan_zero_count(const atpqrm_exceptional_scan* s, size_t t) {
  if (!s || t >= s->s.per_truncation.size()) return 0;
  return s->s.per_truncation[t].zeros.size();
}

atpqrm_status atpqrm_exceptional_scan_zero(const atpqrm_exceptional_scan* s, size_t t, size_t j, double* x,
                                           double* g, int* converged) {
  return guarded([&] {
    need(s, "scan");
    check_index(t, s->s.per_truncation.size());
    const auto& zs = s->s.per_truncation[t].zeros;
    check_index(j, zs.size());
    if (x) *x = zs[j].x;
    if (g) *g = zs[j].g;
    if (converged) *converged = zs[j].converged ? 1 : 0;
  });
}

atpqrm_status atpqrm_exceptional_scan_values(const atpqrm_exceptional_scan* s, size_t t, double* values,
                                             int* converged, size_t nx) {
  return guarded([&] {
    need(s, "scan");
    check_index(t, s->s.per_truncation.size());
    check_capacity(s->nx, nx);
    const auto& c = s->s.per_truncation[t];
    for (std::size_t i = 0; i < s->nx; ++i) {
      if (values) values[i] = c.values[i];
      if (converged) converged[i] = c.converged[i] ? 1 : 0;
    }
  });
}

atpqrm_status atpqrm_fit_exponential_spacing(const double* zeros_g, size_t n, double g_c, long first_index,
                                             atpqrm_spacing_fit* out, double* residuals) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(zeros_g, "zeros_g");
    const std::vector<double> z(zeros_g, zeros_g + n);
    const auto f = atpqrm::fit_exponential_spacing(z, g_c, first_index);
    *out = {f.mu, f.mu0, f.max_abs_residual, f.mean_spacing};
    if (residuals) std::copy(f.residuals.begin(), f.residuals.end(), residuals);
  });
}

/* exact diagonalization */

atpqrm_status atpqrm_ed_run(const atpqrm_params* p, size_t dim, size_t k_lowest, int vectors, atpqrm_ed** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<atpqrm_ed>();
    h->s = atpqrm::diagonalize(atpqrm::build_hamiltonian(convert(p), dim), k_lowest, vectors != 0);
    *out = h.release();
  });
}

atpqrm_status atpqrm_ed_run_converged(const atpqrm_params* p, size_t k_lowest, size_t dim0, double tol,
                                      size_t max_dim, atpqrm_ed** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto h = std::make_unique<atpqrm_ed>();
    h->s = atpqrm::diagonalize_converged(convert(p), k_lowest, dim0, tol, max_dim);
    *out = h.release();
  });
}

void atpqrm_ed_free(atpqrm_ed* e) { delete e; }

size_t atpqrm_ed_count(const atpqrm_ed* e) { return e ? e->s.eigenvalues.size() : 0; }

size_t atpqrm_ed_dim(const atpqrm_ed* e) { return e ? e->s.dim : 0; }

double atpqrm_ed_truncation_shift(const atpqrm_ed* e) { return e ? e->s.truncation_shift : NAN; }

double atpqrm_ed_reliable_below_g(const atpqrm_ed* e) { return e ? e->s.reliable_below_g : NAN; }

atpqrm_status atpqrm_ed_eigenvalue(const atpqrm_ed* e, size_t i, double* energy, int* parity) {
  return guarded([&] {
    need(e, "ed");
    check_index(i, e->s.eigenvalues.size());
    if (energy) *energy = e->s.eigenvalues[i];
    if (parity) *parity = atpqrm::sign(e->s.parity[i]);
  });
}

atpqrm_status atpqrm_ed_eigenvector(const atpqrm_ed* e, size_t i, double* buf, size_t capacity) {
  return guarded([&] {
    need(e, "ed");
    atpqrm::require(!e->s.eigenvectors.empty(), "eigenvectors were not requested");
    check_index(i, e->s.eigenvectors.size());
    const auto& v = e->s.eigenvectors[i];
    check_capacity(v.size(), capacity);
    need(buf, "buf");
    std::copy(v.begin(), v.end(), buf);
  });
}

atpqrm_status atpqrm_parity_expectation(const double* v, size_t n, int* parity) {
  return guarded([&] {
    need(v, "v");
    need(parity, "parity");
    *parity = atpqrm::sign(atpqrm::parity_expectation(std::vector<double>(v, v + n)));
  });
}

atpqrm_status atpqrm_rwa_spectrum(double delta, double g, long n_max, double q, double* lower, double* upper,
                                  double* lone) {
  return guarded([&] {
    const auto s = atpqrm::rwa_spectrum(delta, g, n_max, atpqrm::bargmann_from_value(q));
    if (lower) std::copy(s.lower.begin(), s.lower.end(), lower);
    if (upper) std::copy(s.upper.begin(), s.upper.end(), upper);
    if (lone) *lone = s.lone;
  });
}

atpqrm_status atpqrm_check_positivity(double r, size_t dim, double threshold, double* min_eigenvalue,
                                      size_t* negatives_below_threshold) {
  return guarded([&] {
    const auto rep = atpqrm::check_positivity(r, dim, threshold);
    if (min_eigenvalue) *min_eigenvalue = rep.min_eigenvalue;
    if (negatives_below_threshold) *negatives_below_threshold = rep.negatives_below_threshold;
  });
}

/* collapse point */

atpqrm_status atpqrm_collapse_mass(double x, double r, double* out) {
  return guarded([&] {
    need(out, "out");
    require_positive_r(r);
    *out = atpqrm::mass(x, r);
  });
}

atpqrm_status atpqrm_collapse_potential(double x, double delta, double r, double* out) {
  return guarded([&] {
    need(out, "out");
    require_positive_r(r);
    *out = atpqrm::potential(x, delta, r);
  });
}

atpqrm_status atpqrm_collapse_y_of_x(double x, double alpha, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::y_of_x(x, alpha);
  });
}

atpqrm_status atpqrm_collapse_x_of_y(double y, double alpha, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::x_of_y(y, alpha);
  });
}

atpqrm_status atpqrm_collapse_v2(double y, double delta, double r, double kappa, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = atpqrm::v2(y, delta, r, kappa);
  });
}

atpqrm_status atpqrm_tail_coefficients(double delta, double r, double kappa, atpqrm_tail* out) {
  return guarded([&] {
    need(out, "out");
    const auto t = atpqrm::tail_coefficients(delta, r, kappa);
    *out = {t.gamma, t.gamma_prime, region_of(t.region), t.boundary_of, class_of(atpqrm::expected_count_class(t))};
  });
}

atpqrm_status atpqrm_faddeev_i1(double delta, double r, double kappa, double y_max, atpqrm_faddeev* out) {
  return guarded([&] {
    need(out, "out");
    const auto f = atpqrm::faddeev_i1(delta, r, kappa, y_max);
    *out = {f.divergent ? 1 : 0, f.value, f.error, f.tail_constant, f.y_max};
  });
}

atpqrm_status atpqrm_brownstein_i2(double delta, double r, double kappa, double* value, double* error) {
  return guarded([&] {
    const auto b = atpqrm::brownstein_i2(delta, r, kappa);
    if (value) *value = b.value;
    if (error) *error = b.error;
  });
}

atpqrm_collapse_options atpqrm_collapse_options_default(void) {
  const atpqrm::CollapseOptions d;
  return {d.L, d.h, d.k_states, d.L_max, d.auto_enlarge ? 1 : 0, d.boundary_tolerance};
}

atpqrm_status atpqrm_bound_states_solve(double delta, double r, const atpqrm_collapse_options* opt,
                                        atpqrm_bound_states** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    atpqrm::CollapseOptions o;
    if (opt) {
      o.L = opt->L;
      o.h = opt->h;
      o.k_states = opt->k_states;
      o.L_max = opt->L_max;
      o.auto_enlarge = opt->auto_enlarge != 0;
      o.boundary_tolerance = opt->boundary_tolerance;
    }
    auto h = std::make_unique<atpqrm_bound_states>();
    h->s = atpqrm::solve_bound_states(delta, r, o);
    h->delta = delta;
    h->r = r;
    *out = h.release();
  });
}

void atpqrm_bound_states_free(atpqrm_bound_states* s) { delete s; }

size_t atpqrm_bound_states_count(const atpqrm_bound_states* s) { return s ? s->s.states.size() : 0; }

double atpqrm_bound_states_ground_energy(const atpqrm_bound_states* s) {
  return s ? s->s.ground_energy() : NAN;
}

atpqrm_status atpqrm_bound_states_get(const atpqrm_bound_states* s, size_t i, atpqrm_bound_state* out) {
  return guarded([&] {
    need(s, "bound states");
    need(out, "out");
    check_index(i, s->s.states.size());
    const auto& b = s->s.states[i];
    *out = {b.kappa4, b.energy, atpqrm::sign(b.parity), b.boundary_weight, b.gap, b.h, b.L, b.psi.size()};
  });
}

atpqrm_status atpqrm_bound_states_wavefunction(const atpqrm_bound_states* s, size_t i, double* buf,
                                               size_t capacity) {
  return guarded([&] {
    need(s, "bound states");
    check_index(i, s->s.states.size());
    const auto& psi = s->s.states[i].psi;
    check_capacity(psi.size(), capacity);
    need(buf, "buf");
    std::copy(psi.begin(), psi.end(), buf);
  });
}

atpqrm_status atpqrm_bound_states_diagnostics(const atpqrm_bound_states* s, atpqrm_bound_diagnostics* out) {
  return guarded([&] {
    need(s, "bound states");
    need(out, "out");
    const auto& b = s->s;
    *out = {b.unresolved, b.lowest_eigenvalue, b.noise_floor, b.L_used,
            b.h,          class_of(b.count_class), region_of(b.tail.region)};
  });
}

atpqrm_status atpqrm_bound_states_nondegeneracy(const atpqrm_bound_states* s, size_t i, atpqrm_nondegeneracy* out) {
  return guarded([&] {
    need(s, "bound states");
    need(out, "out");
    check_index(i, s->s.states.size());
    const auto rep = atpqrm::nondegeneracy_check(s->s.states[i], s->delta, s->r);
    *out = {rep.simple ? 1 : 0, rep.gap, rep.tolerance, rep.first_order_residual, rep.annihilated ? 1 : 0,
            rep.nondegenerate ? 1 : 0};
  });
}

atpqrm_status atpqrm_threshold_bound(double kappa4, double delta, double r, int* satisfied, int* attractive_tail) {
  return guarded([&] {
    if (satisfied) *satisfied = atpqrm::satisfies_threshold_bound(kappa4, delta, r) ? 1 : 0;
    if (attractive_tail) *attractive_tail = atpqrm::has_attractive_tail(kappa4, delta, r) ? 1 : 0;
  });
}

}  // extern "C"
