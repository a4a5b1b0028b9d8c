#include "core/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/numeric.hpp"
#include "core/recurrence.hpp"

namespace atpqrm {

namespace {

constexpr int kRescaleExponent = 512;
constexpr int kRatioWindow = 16;

template <typename Real, template <typename> class Acc>
GEvaluation sum_series(RescaledStepper<Real>& st, long n_max, long n_min_stop, const GOptions& opt,
                       int parity) {
  Acc<Real> total, sum_lam, sum_xi;
  const Real big = std::ldexp(Real(1), kRescaleExponent);
  const Real shrink = std::ldexp(Real(1), -kRescaleExponent);
  long scale_exp = 0;

  double ratios[kRatioWindow];
  int nratios = 0;
  Real prev_mag = -1;
  Real last_inc = 0;
  long n = st.index();
  for (;;) {
    const Real lam = st.lambda(), xi = st.xi();
    const Real inc = parity > 0 ? lam + xi : lam - xi;
    total.add(inc);
    sum_lam.add(lam);
    sum_xi.add(xi);
    last_inc = inc;

    const Real mag = std::abs(lam) + std::abs(xi);
    if (prev_mag > 0) {
      ratios[nratios % kRatioWindow] = static_cast<double>(mag / prev_mag);
      ++nratios;
    }
    prev_mag = mag;

    if (n >= n_max) break;
    if (opt.early_stop && n >= n_min_stop && nratios >= kRatioWindow) {
      const double rho = *std::max_element(ratios, ratios + kRatioWindow);
      const double s = std::abs(static_cast<double>(total.value()));
      const double floor = std::ldexp(1.0, static_cast<int>(-scale_exp));
      if (mag == 0 || (rho < 1.0 && static_cast<double>(mag) * rho / (1.0 - rho) <
                                        1e-3 * opt.tol * std::max(floor, s)))
        break;
    }

    st.advance();
    ++n;
    if (std::abs(st.lambda()) > big || std::abs(st.xi()) > big) {
      st.scale(shrink);
      total.scale(shrink);
      sum_lam.scale(shrink);
      sum_xi.scale(shrink);
      prev_mag *= shrink;
      scale_exp += kRescaleExponent;
    }
    if (!std::isfinite(static_cast<double>(st.lambda())) || !std::isfinite(static_cast<double>(st.xi())))
      break;
  }

  GEvaluation ev;
  ev.truncation_used = n;
  const int e = static_cast<int>(std::min<long>(scale_exp, 1 << 20));
  ev.value = static_cast<double>(std::ldexp(total.value(), e));
  ev.sum_lambda = static_cast<double>(std::ldexp(sum_lam.value(), e));
  ev.sum_xi = static_cast<double>(std::ldexp(sum_xi.value(), e));

  double rho = std::numeric_limits<double>::infinity();
  if (nratios > 0) {
    const int k = std::min(nratios, kRatioWindow);
    rho = *std::max_element(ratios, ratios + k);
  }
  const double inc = std::abs(static_cast<double>(std::ldexp(last_inc, e)));
  if (inc == 0.0)
    ev.tail_estimate = 0.0;
  else if (rho < 1.0)
    ev.tail_estimate = inc * std::max(1.0, rho / (1.0 - rho));
  else
    ev.tail_estimate = std::numeric_limits<double>::infinity();
  ev.converged = std::isfinite(ev.value) && ev.tail_estimate < opt.tol * std::max(1.0, std::abs(ev.value));
  return ev;
}

template <typename Real>
GEvaluation run_regular(const ModelParams& p, double energy, long n_max, long n_min, const GOptions& opt) {
  const BasicFrame<Real> f = derive_frame_as<Real>(p);
  RescaledStepper<Real> st(
      RecurrenceSetup<Real>::make(p, f, static_cast<Real>(energy) + Real(0.5)));
  st.start_regular();
  if (opt.summation == Summation::compensated)
    return sum_series<Real, CompensatedSum>(st, n_max, n_min, opt, sign(p.parity));
  return sum_series<Real, NaiveSum>(st, n_max, n_min, opt, sign(p.parity));
}

template <typename Real>
GEvaluation run_exceptional(const ModelParams& p, long m, long n_max, const GOptions& opt) {
  const BasicFrame<Real> f = derive_frame_as<Real>(p);
  const Real qv = static_cast<Real>(value(p.q));
  const Real eshift = 2 * (static_cast<Real>(m) + qv) * f.beta_plus * f.beta_minus;
  Real lead = 1;  // [2(q-1/4)]! = 1 for both q at m = 0
  if (m > 0) {
    if (f.tanh_theta == 0)
      lead = 0;
    else
      lead = std::exp(static_cast<Real>(log_bargmann_prefactor(m, value(p.q))) +
                      static_cast<Real>(m) * std::log(f.tanh_theta));
  }
  RescaledStepper<Real> st(RecurrenceSetup<Real>::make(p, f, eshift, m));
  st.start_on_pole(m, lead);
  if (opt.summation == Summation::compensated)
    return sum_series<Real, CompensatedSum>(st, n_max, m + 16, opt, sign(p.parity));
  return sum_series<Real, NaiveSum>(st, n_max, m + 16, opt, sign(p.parity));
}

}  // namespace

long default_truncation(const ModelParams& p, double energy) {
  const long nstar = estimate_n_star(p, energy);
  return std::max<long>(2 * nstar, 1000);
}

GEvaluation eval_g(const ModelParams& p, double energy, const GOptions& opt) {
  require(std::isfinite(energy), "energy must be finite");
  require(opt.tol > 0.0, "tolerance must be positive");
  const BogoliubovFrame f = derive_frame(p);
  const long nstar = estimate_n_star(p, energy);
  const long n_max = opt.truncation > 0 ? opt.truncation : std::max<long>(2 * nstar, 1000);
  check_pole_distance(p, f, energy, n_max);
  const long n_min = std::max<long>(2 * nstar, 16);
  GEvaluation ev = opt.precision == Precision::extended
                       ? run_regular<long double>(p, energy, n_max, n_min, opt)
                       : run_regular<double>(p, energy, n_max, n_min, opt);
  ev.pole_distance = nearest_pole_distance(p, f, energy);
  return ev;
}

GEvaluation eval_g_exceptional(const ModelParams& p, long m, const GOptions& opt) {
  require(m >= 0, "pole index must be >= 0");
  require(opt.tol > 0.0, "tolerance must be positive");
  const long n_max = opt.truncation > 0 ? opt.truncation : 100000;
  require(n_max > m, "truncation must exceed the pole index");
  GEvaluation ev = opt.precision == Precision::extended ? run_exceptional<long double>(p, m, n_max, opt)
                                                        : run_exceptional<double>(p, m, n_max, opt);
  ev.pole_distance = 0.0;
  return ev;
}

double eval_f(double delta, double r, Bargmann q, long n, double g) {
  require(n >= 0, "pole index must be >= 0");
  require(r > 0.0, "F_n needs r > 0");
  require(g > 0.0, "F_n needs g > 0; use eval_f_at_collapse at g_c");
  ModelParams p;
  p.delta = delta;
  p.r = r;
  p.g = g;
  p.q = q;
  const BogoliubovFrame fr = derive_frame(p);
  const std::vector<double> fs = raw_f_on_pole_line(p, n);

  const double qv = value(q);
  const double cc = g * (1.0 - r) / (4.0 * std::sqrt(r) * fr.beta_minus);
  const double c = (1.0 - r) * cc;
  const double bracket = delta / 2.0 - 2.0 * g * g * (1.0 - r * r) * (static_cast<double>(n) + qv);

  // c^k/k! is built incrementally; the (1+r)/(1-r) 2k term is folded into
  // 2(1+r) cc c^{k-1}/(k-1)! so that r = 1 stays finite.
  CompensatedSum<double> sum;
  double ck = 1.0;    // c^k / k!
  double ckm1 = 0.0;  // c^{k-1} / (k-1)!
  for (long k = 0; k <= n; ++k) {
    const double fi = fs[static_cast<std::size_t>(n - k)];
    sum.add(fi * ck * bracket);
    if (k >= 1) sum.add(fi * 2.0 * (1.0 + r) * cc * ckm1);
    ckm1 = ck;
    ck = ck * c / static_cast<double>(k + 1);
  }
  return sum.value();
}

double eval_f_at_collapse(double delta, double r, Bargmann q, long n) {
  require(n >= 0, "pole index must be >= 0");
  require(r > 0.0, "F_n needs r > 0");
  const std::vector<double> fs = collapse_coefficients(n, q).second;
  const double qv = value(q);
  const double c = (1.0 - r) * (1.0 - r) / (8.0 * r);
  const double cross = (1.0 - r * r) / (4.0 * r);  // 2(1+r) cc at g_c
  const double bracket = delta / 2.0 - 2.0 * (1.0 - r) / (1.0 + r) * (static_cast<double>(n) + qv);
  CompensatedSum<double> sum;
  double ck = 1.0, ckm1 = 0.0;
  for (long k = 0; k <= n; ++k) {
    const double fi = fs[static_cast<std::size_t>(n - k)];
    sum.add(fi * ck * bracket);
    if (k >= 1) sum.add(fi * cross * ckm1);
    ckm1 = ck;
    ck = ck * c / static_cast<double>(k + 1);
  }
  return sum.value();
}

double collapse_f_scale(double r, long n) {
  return std::pow((1.0 + r) * (1.0 + r) / (8.0 * r), static_cast<double>(n));
}

}  // namespace atpqrm
