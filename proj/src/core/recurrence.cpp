#include "core/recurrence.hpp"

#include <algorithm>
#include <cmath>

namespace atpqrm {

double pole_tolerance(double energy) { return 1e-10 * std::max(1.0, std::abs(energy)); }

double nearest_pole_distance(const ModelParams& p, const BogoliubovFrame& f, double energy) {
  const double q = value(p.q);
  const double pos = (energy + 0.5) / f.pole_spacing - q;
  const double n0 = std::max(0.0, std::floor(pos));
  double best = std::abs(energy - pole_energy(static_cast<long>(n0), p.q, f));
  best = std::min(best, std::abs(energy - pole_energy(static_cast<long>(n0) + 1, p.q, f)));
  return best;
}

void check_pole_distance(const ModelParams& p, const BogoliubovFrame& f, double energy, long N) {
  const double tol = pole_tolerance(energy);
  const double pos = (energy + 0.5) / f.pole_spacing - value(p.q);
  const long lo = std::clamp(static_cast<long>(std::floor(pos)), 0L, N);
  const long hi = std::clamp(lo + 1, 0L, N);
  for (long n : {lo, hi}) {
    const double dist = std::abs(energy - pole_energy(n, p.q, f));
    if (dist < tol) throw PoleProximity(n, dist);
  }
}

namespace {

void store(CoefficientSeries& s, long n, double first, double second, std::size_t cap,
           bool keep_first = true) {
  if (static_cast<std::size_t>(n) < cap) {
    if (keep_first) s.first.push_back(first);
    s.second.push_back(second);
  }
  s.last_first = first;
  s.last_second = second;
}

}  // namespace

CoefficientSeries run_raw(const ModelParams& p, double energy, long N,
                          const RecurrenceOptions& opt) {
  require(N >= 0, "truncation must be >= 0");
  require(p.r > 0.0 && p.g > 0.0, "raw recurrence needs r > 0 and g > 0");
  const BogoliubovFrame f = derive_frame(p);
  check_pole_distance(p, f, energy, N);

  const double r = p.r, g = p.g, q = value(p.q), delta = p.delta;
  const double bp = f.beta_plus, bm = f.beta_minus;
  const double eshift = energy + 0.5;
  const double sr = std::sqrt(r);
  const double coupling = 2.0 * g * g * (1.0 - r * r);
  const double e_cross = g * (1.0 - r) / (2.0 * sr);

  CoefficientSeries s;
  s.kind = SeriesKind::raw;
  s.energy = energy;
  s.truncation = N;
  s.n_star_estimate = estimate_n_star(p, energy);
  const std::size_t reserve = std::min<std::size_t>(static_cast<std::size_t>(N) + 1, opt.storage_cap);
  s.first.reserve(reserve);
  s.second.reserve(reserve);

  double e_prev = 0.0, f_prev = 0.0;
  double f_cur = 1.0;
  for (long n = 0; n <= N; ++n) {
    const double K = static_cast<double>(n) + q;
    const double D = 2.0 * K * bp * bm - eshift;
    const double e_cur =
        (e_cross * ((1.0 + r) * bm * f_prev - (1.0 - r) * bp * e_prev) + (delta / 2.0 - coupling * K) * f_cur) / D;
    store(s, n, e_cur, f_cur, opt.storage_cap);
    if (n == N) break;
    const double w = (K + 0.25) * (K + 0.75);
    const double f_next =
        (1.0 + r) * bm * ((1.0 - r) * bp * e_prev - (1.0 + r) * bm * f_prev) / (16.0 * r * w) +
        ((2.0 * K * bm * (2.0 - bp * bp) - eshift * bp) * f_cur + (-delta / 2.0 - coupling * K) * bp * e_cur) /
            (8.0 * sr * g * w);
    e_prev = e_cur;
    f_prev = f_cur;
    f_cur = f_next;
  }
  return s;
}

CoefficientSeries run_rescaled(const ModelParams& p, double energy, long N,
                               const RecurrenceOptions& opt) {
  require(N >= 0, "truncation must be >= 0");
  const BogoliubovFrame f = derive_frame(p);
  check_pole_distance(p, f, energy, N);

  CoefficientSeries s;
  s.kind = SeriesKind::rescaled;
  s.energy = energy;
  s.truncation = N;
  s.n_star_estimate = estimate_n_star(p, energy);
  const std::size_t reserve = std::min<std::size_t>(static_cast<std::size_t>(N) + 1, opt.storage_cap);
  s.first.reserve(reserve);
  s.second.reserve(reserve);

  RescaledStepper<double> st(RecurrenceSetup<double>::make(p, f, energy + 0.5));
  st.start_regular();
  for (long n = 0;; ++n) {
    store(s, n, st.lambda(), st.xi(), opt.storage_cap);
    if (n == N) break;
    st.advance();
  }
  return s;
}

CoefficientSeries collapse_coefficients(long N, Bargmann q) {
  require(N >= 0, "truncation must be >= 0");
  const double qv = value(q);
  CoefficientSeries s;
  s.kind = SeriesKind::collapse;
  s.truncation = N;
  s.second.reserve(static_cast<std::size_t>(N) + 1);
  double f_prev = 0.0, f_cur = 1.0;
  for (long n = 0; n <= N; ++n) {
    s.second.push_back(f_cur);
    const double K = static_cast<double>(n) + qv;
    const double f_next = (K * f_cur - 0.25 * f_prev) / ((K + 0.25) * (K + 0.75));
    f_prev = f_cur;
    f_cur = f_next;
  }
  s.last_second = s.second.back();
  return s;
}

double collapse_coefficient_closed_form(long n) {
  require(n >= 0, "index must be >= 0");
  return std::exp(-static_cast<double>(n) * std::log(2.0) - std::lgamma(static_cast<double>(n) + 1.0));
}

std::vector<double> raw_f_on_pole_line(const ModelParams& p, long n) {
  require(n >= 0, "pole index must be >= 0");
  require(p.r > 0.0 && p.g > 0.0, "raw recurrence needs r > 0 and g > 0");
  const BogoliubovFrame f = derive_frame(p);
  const double r = p.r, g = p.g, q = value(p.q), delta = p.delta;
  const double bp = f.beta_plus, bm = f.beta_minus;
  const double bb = bp * bm;
  const double eshift = 2.0 * (static_cast<double>(n) + q) * bb;
  const double sr = std::sqrt(r);
  const double coupling = 2.0 * g * g * (1.0 - r * r);
  const double e_cross = g * (1.0 - r) / (2.0 * sr);

  std::vector<double> fs;
  fs.reserve(static_cast<std::size_t>(n) + 1);
  double e_prev = 0.0, f_prev = 0.0, f_cur = 1.0;
  for (long i = 0; i <= n; ++i) {
    fs.push_back(f_cur);
    if (i == n) break;
    const double K = static_cast<double>(i) + q;
    const double D = 2.0 * static_cast<double>(i - n) * bb;
    const double e_cur =
        (e_cross * ((1.0 + r) * bm * f_prev - (1.0 - r) * bp * e_prev) + (delta / 2.0 - coupling * K) * f_cur) / D;
    const double w = (K + 0.25) * (K + 0.75);
    const double f_next =
        (1.0 + r) * bm * ((1.0 - r) * bp * e_prev - (1.0 + r) * bm * f_prev) / (16.0 * r * w) +
        ((2.0 * K * bm * (2.0 - bp * bp) - eshift * bp) * f_cur + (-delta / 2.0 - coupling * K) * bp * e_cur) /
            (8.0 * sr * g * w);
    e_prev = e_cur;
    f_prev = f_cur;
    f_cur = f_next;
  }
  return fs;
}

StepCoefficients recurrence_coefficients(const ModelParams& p, double energy, long n) {
  require(n >= 0, "index must be >= 0");
  const BogoliubovFrame f = derive_frame(p);
  const double r = p.r, g = p.g, q = value(p.q), delta = p.delta;
  const double bp = f.beta_plus, bm = f.beta_minus, s = f.tanh_over_g_sqrt_r;
  const double eshift = energy + 0.5;
  const double coupling = 2.0 * g * g * (1.0 - r * r);
  auto D = [&](long k) { return 2.0 * (static_cast<double>(k) + q) * bp * bm - eshift; };
  auto nu = [&](long k) {
    const double K = static_cast<double>(k) + q;
    return (K - 0.25) * (K - 0.75);
  };
  const double K = static_cast<double>(n) + q;
  const double nd = static_cast<double>(n);

  StepCoefficients c;
  c.a = (delta / 2.0 - coupling * K) / D(n);
  const double B = g * g * (1.0 - r) * s * nu(n + 1) / (nd + 1.0) / D(n + 1);
  c.b = B * (1.0 + r) * bm;
  c.c = -B * (1.0 - r) * bp;
  c.d = s / (4.0 * (nd + 1.0)) * (2.0 * K * bm * (2.0 - bp * bp) - eshift * bp);
  c.dt = s / (4.0 * (nd + 1.0)) * (-delta / 2.0 - coupling * K) * bp;
  const double H = (1.0 + r) * g * g * s * s / 4.0 * nu(n + 1) / ((nd + 1.0) * (nd + 2.0));
  c.h = -H * (1.0 + r) * bm * bm;
  c.ht = H * (1.0 - r) * bp * bm;
  return c;
}

AsymptoticCoefficients asymptotic_coefficients(const ModelParams& p) {
  require(p.g > 0.0, "asymptotic coefficients need g > 0");
  const BogoliubovFrame f = derive_frame(p);
  const double r = p.r, g = p.g;
  const double bp = f.beta_plus, bm = f.beta_minus;
  // Written through s = tanh(theta)/(g sqrt r) so that r = 0 stays finite.
  const double s = f.tanh_over_g_sqrt_r;
  AsymptoticCoefficients a;
  a.a = -g * g * (1.0 - r * r) / (bp * bm);
  a.b = g * g * (1.0 - r * r) * s / (2.0 * bp);
  a.c = -g * g * (1.0 - r) * (1.0 - r) * s / (2.0 * bm);
  a.d = bm * (2.0 - bp * bp) * s / 2.0;
  a.dt = -g * g * (1.0 - r * r) * bp * s / 2.0;
  a.h = -(1.0 + r) * (1.0 + r) * bm * bm * g * g * s * s / 4.0;
  a.ht = (1.0 - r * r) * bp * bm * g * g * s * s / 4.0;
  return a;
}

long estimate_n_star(const ModelParams& p, double energy) {
  const BogoliubovFrame f = derive_frame(p);
  const double x = std::abs(energy + 0.5) / f.pole_spacing;
  if (!std::isfinite(x) || x > 1e15) return static_cast<long>(1e15);
  return static_cast<long>(std::ceil(x));
}

}  // namespace atpqrm
