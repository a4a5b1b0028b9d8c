#pragma once

// Coefficient recurrences behind every G-function.
//
// The raw recurrence produces the expansion coefficients (e_n, f_n) in the
// squeezed Bargmann basis. The rescaled recurrence produces
//   Lambda_n = P_n e_n tanh^n(theta),  xi_n = P_n f_n tanh^n(theta),
//   P_n = [2(n+q-1/4)]! / (2^n n!),
// whose plain sum is the G-function and which stays representable where the
// raw coefficients and P_n individually over/underflow.

#include <cstddef>
#include <vector>

#include "core/error.hpp"
#include "core/model.hpp"

namespace atpqrm {

enum class SeriesKind { raw, rescaled, collapse };

struct CoefficientSeries {
  SeriesKind kind = SeriesKind::raw;
  // e_n / Lambda_n; empty for the collapse kind.
  std::vector<double> first;
  // f_n / xi_n.
  std::vector<double> second;
  double energy = 0.0;
  long truncation = 0;  // N; terms 0..N were generated
  long n_star_estimate = 0;
  // Values at n = N (equal to the back of the vectors unless storage was capped).
  double last_first = 0.0;
  double last_second = 0.0;

  std::size_t stored() const { return second.size(); }
};

struct RecurrenceOptions {
  // Terms beyond this index are generated but not stored.
  std::size_t storage_cap = 1'000'000;
};

// Pole rejection window: 1e-10 * max(1, |E|).
double pole_tolerance(double energy);

// Throws PoleProximity if |E - E_n^pole| < pole_tolerance(E) for some n <= N.
void check_pole_distance(const ModelParams& p, const BogoliubovFrame& f, double energy, long N);

// Distance from E to the nearest pole line (any n >= 0).
double nearest_pole_distance(const ModelParams& p, const BogoliubovFrame& f, double energy);

// Raw (e_n, f_n) with f_0 = 1 and index -1 terms equal to zero. Needs r > 0, g > 0.
CoefficientSeries run_raw(const ModelParams& p, double energy, long N,
                          const RecurrenceOptions& opt = {});

// Rescaled (Lambda_n, xi_n); well defined for r >= 0 and 0 <= g < g_c.
CoefficientSeries run_rescaled(const ModelParams& p, double energy, long N,
                               const RecurrenceOptions& opt = {});

// f_n^c for n = 0..N from the collapse-point recurrence
//   f_{n+1} = [(n+q) f_n - f_{n-1}/4] / [(n+q+1/4)(n+q+3/4)].
CoefficientSeries collapse_coefficients(long N, Bargmann q = Bargmann::quarter);

// Closed form 1/(2^n n!).
double collapse_coefficient_closed_form(long n);

// f_0..f_n of the raw recurrence with E pinned to the n-th pole line. The e
// updates for i < n have denominators 2(i-n) beta_+ beta_- != 0.
std::vector<double> raw_f_on_pole_line(const ModelParams& p, long n);

// Coefficients of the compact rescaled recurrence
//   Lambda_n = a_n xi_n + b_{n-1} xi_{n-1} + c_{n-1} Lambda_{n-1}
//   xi_n     = d_{n-1} xi_{n-1} + dt_{n-1} Lambda_{n-1}
//            + h_{n-2} xi_{n-2} + ht_{n-2} Lambda_{n-2}
struct StepCoefficients {
  double a = 0, b = 0, c = 0, d = 0, dt = 0, h = 0, ht = 0;
};

StepCoefficients recurrence_coefficients(const ModelParams& p, double energy, long n);

// n -> infinity limits of StepCoefficients; independent of q and E.
struct AsymptoticCoefficients {
  double a = 0, b = 0, c = 0, d = 0, dt = 0, h = 0, ht = 0;
};

AsymptoticCoefficients asymptotic_coefficients(const ModelParams& p);

// ceil(|E + 1/2| / (2 beta_+ beta_-)).
long estimate_n_star(const ModelParams& p, double energy);

// Streaming form of the rescaled recurrence, shared by all G-function
// evaluations and instantiated for double and long double.
template <typename Real>
struct RecurrenceSetup {
  Real delta{}, r{}, g{}, q{};
  Real beta_plus{}, beta_minus{}, s{};  // s = tanh(theta)/(g sqrt r)
  Real e_shift{};                       // E + 1/2
  long pole_line = -1;                  // >= 0 when E sits on that pole line

  static RecurrenceSetup make(const ModelParams& p, const BasicFrame<Real>& f, Real e_shift,
                              long pole_line = -1) {
    RecurrenceSetup s;
    s.delta = static_cast<Real>(p.delta);
    s.r = static_cast<Real>(p.r);
    s.g = static_cast<Real>(p.g);
    s.q = static_cast<Real>(value(p.q));
    s.beta_plus = f.beta_plus;
    s.beta_minus = f.beta_minus;
    s.s = f.tanh_over_g_sqrt_r;
    s.e_shift = e_shift;
    s.pole_line = pole_line;
    return s;
  }
};

template <typename Real>
class RescaledStepper {
 public:
  explicit RescaledStepper(const RecurrenceSetup<Real>& setup) : c_(setup) {
    const Real g2 = c_.g * c_.g;
    coupling_ = 2 * g2 * (1 - c_.r * c_.r);
    b_scale_ = g2 * (1 - c_.r) * c_.s;
    h_scale_ = (1 + c_.r) * g2 * c_.s * c_.s / 4;
  }

  // n = 0 with f_0 = 1 (so xi_0 = 1 for both Bargmann indices).
  void start_regular() {
    n_ = 0;
    lam_prev_ = xi_prev_ = 0;
    xi_ = 1;
    lam_ = lambda_at(0, xi_, 0, 0);
  }

  // n = m with all lower coefficients zero, xi_m = 0 and Lambda_m = lead.
  void start_on_pole(long m, Real lead) {
    n_ = m;
    lam_prev_ = xi_prev_ = 0;
    xi_ = 0;
    lam_ = lead;
  }

  void advance() {
    const long n = n_;
    const Real K = static_cast<Real>(n) + c_.q;
    const Real bp = c_.beta_plus, bm = c_.beta_minus;
    Real xi_next =
        c_.s / (4 * static_cast<Real>(n + 1)) *
        ((-c_.delta / 2 - coupling_ * K) * bp * lam_ +
         (2 * K * bm * (2 - bp * bp) - c_.e_shift * bp) * xi_);
    if (n >= 1) {
      const Real nu = nu_of(n);
      xi_next += h_scale_ * nu / (static_cast<Real>(n) * static_cast<Real>(n + 1)) *
                 ((1 - c_.r) * bp * bm * lam_prev_ - (1 + c_.r) * bm * bm * xi_prev_);
    }
    const Real lam_next = lambda_at(n + 1, xi_next, xi_, lam_);
    lam_prev_ = lam_;
    xi_prev_ = xi_;
    lam_ = lam_next;
    xi_ = xi_next;
    n_ = n + 1;
  }

  long index() const { return n_; }
  Real lambda() const { return lam_; }
  Real xi() const { return xi_; }

  void scale(Real factor) {
    lam_ *= factor;
    xi_ *= factor;
    lam_prev_ *= factor;
    xi_prev_ *= factor;
  }

  Real denominator(long n) const {
    const Real bb = c_.beta_plus * c_.beta_minus;
    if (c_.pole_line >= 0) return 2 * static_cast<Real>(n - c_.pole_line) * bb;
    return 2 * (static_cast<Real>(n) + c_.q) * bb - c_.e_shift;
  }

 private:
  Real nu_of(long n) const {
    const Real K = static_cast<Real>(n) + c_.q;
    return (K - Real(0.25)) * (K - Real(0.75));
  }

  Real lambda_at(long n, Real xi_n, Real xi_prev, Real lam_prev) const {
    const Real K = static_cast<Real>(n) + c_.q;
    Real num = (c_.delta / 2 - coupling_ * K) * xi_n;
    if (n >= 1)
      num += b_scale_ * nu_of(n) / static_cast<Real>(n) *
             ((1 + c_.r) * c_.beta_minus * xi_prev - (1 - c_.r) * c_.beta_plus * lam_prev);
    return num / denominator(n);
  }

  RecurrenceSetup<Real> c_;
  Real coupling_{};  // 2 g^2 (1 - r^2)
  Real b_scale_{};   // g^2 (1 - r) s
  Real h_scale_{};   // (1 + r) g^2 s^2 / 4
  long n_ = 0;
  Real lam_prev_{}, xi_prev_{}, lam_{}, xi_{};
};

}  // namespace atpqrm
