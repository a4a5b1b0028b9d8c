#pragma once

// Model parameters and the closed-form quantities derived from them:
// squeezing frame, collapse coupling, critical splittings, pole lines and the
// ground/first-excited crossing point.
//
// Units: the cavity frequency is 1; the rotating coupling is g and the
// counter-rotating coupling is r*g.

#include <cmath>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace atpqrm {

// Bargmann index of the even (1/4) or odd (3/4) photon-number subspace.
enum class Bargmann { quarter, three_quarters };

constexpr double value(Bargmann q) { return q == Bargmann::quarter ? 0.25 : 0.75; }

// Lowest photon number k0 of the subspace: 0 for q=1/4, 1 for q=3/4.
constexpr int lowest_photon_number(Bargmann q) { return q == Bargmann::quarter ? 0 : 1; }

Bargmann bargmann_from_value(double q);

// Parity within a Bargmann subspace (the Z4 symmetry reduced to Z2).
enum class Parity : int { even = 1, odd = -1 };

constexpr int sign(Parity p) { return static_cast<int>(p); }

struct ModelParams {
  double delta = 0.0;  // qubit splitting
  double r = 0.0;      // anisotropy ratio
  double g = 0.0;      // rotating coupling
  Bargmann q = Bargmann::quarter;
  Parity parity = Parity::even;
};

// Checks finiteness and sign constraints. Does not require g < g_c.
void validate(const ModelParams& p);

constexpr double collapse_coupling(double r) { return 1.0 / (1.0 + r); }

// Negative for r > 1; callers interpret.
constexpr double critical_splitting(Bargmann q, double r) {
  return 4.0 * value(q) * (1.0 - r) / (1.0 + r);
}

// Quantities of the squeezing (Bogoliubov) frame. tanh_over_g_sqrt_r is
// tanh(theta)/(g*sqrt(r)) = 2/(beta_plus + beta_minus); it stays finite at g=0
// and r=0 and is what the rescaled recurrence uses instead of 1/(sqrt(r) g).
template <typename Real>
struct BasicFrame {
  Real beta_plus{};
  Real beta_minus{};
  Real theta{};
  Real tanh_theta{};
  Real cosh2_theta{};
  Real sinh2_theta{};
  Real r1{};  // r sinh^2 + cosh^2
  Real r2{};  // r cosh^2 + sinh^2
  Real g_c{};
  Real tanh_over_g_sqrt_r{};
  Real pole_spacing{};  // 2 beta_plus beta_minus
};

using BogoliubovFrame = BasicFrame<double>;

template <typename Real>
BasicFrame<Real> derive_frame_as(const ModelParams& p) {
  validate(p);
  const Real g = static_cast<Real>(p.g);
  const Real r = static_cast<Real>(p.r);
  const Real gr = g * (1 + r);
  if (!(gr < Real(1)))
    throw Error(ErrorCode::coupling_at_or_above_critical,
                "coupling g=" + std::to_string(p.g) + " is not below g_c=" +
                    std::to_string(collapse_coupling(p.r)));
  BasicFrame<Real> f;
  f.g_c = 1 / (1 + r);
  f.beta_plus = std::sqrt((1 - gr) * (1 + gr));
  const Real gm = g * (r - 1);
  f.beta_minus = std::sqrt((1 - gm) * (1 + gm));
  const Real bsum = f.beta_plus + f.beta_minus;
  f.tanh_over_g_sqrt_r = 2 / bsum;
  f.tanh_theta = g * std::sqrt(r) * f.tanh_over_g_sqrt_r;
  // sinh^2 = (beta_- - beta_+)/(2 beta_+) with beta_-^2 - beta_+^2 = 4 g^2 r.
  f.sinh2_theta = 2 * g * g * r / (f.beta_plus * bsum);
  f.cosh2_theta = 1 + f.sinh2_theta;
  f.theta = std::atanh(f.tanh_theta);
  f.r1 = r * f.sinh2_theta + f.cosh2_theta;
  f.r2 = r * f.cosh2_theta + f.sinh2_theta;
  f.pole_spacing = 2 * f.beta_plus * f.beta_minus;
  return f;
}

inline BogoliubovFrame derive_frame(const ModelParams& p) { return derive_frame_as<double>(p); }

// E_n^pole = 2(n+q) beta_+ beta_- - 1/2.
double pole_energy(long n, const ModelParams& p);
double pole_energy(long n, Bargmann q, const BogoliubovFrame& f);

struct CrossingPoint {
  double g0 = 0.0;
  double e0 = std::numeric_limits<double>::quiet_NaN();
  bool inside_physical_range = false;  // g0 <= g_c and e0 real
};

// Crossing of the ground and first excited level on the lowest pole line.
// Requires delta > 0 and 0 <= r < 1.
CrossingPoint crossing_point(Bargmann q, double delta, double r);

// (E + 1/2)/(2 beta_+ beta_-) - q; maps pole lines onto the integers.
double scaled_energy(double energy, Bargmann q, const BogoliubovFrame& f);

std::string to_string(Bargmann q);
std::string to_string(Parity p);

}  // namespace atpqrm
