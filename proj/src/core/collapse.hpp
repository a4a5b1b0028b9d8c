#pragma once

// Bound states at the collapse coupling g = g_c.
//
// With kappa^2 = |E + 1/2| the lower spinor component obeys
//   -(psi' / m(x))' + V(x) psi = -kappa^4 psi,
//   m(x) = (x^2 + 1)/(alpha x^2 + 1),           alpha = 4r/(1+r)^2,
//   V(x) = -[P x^2 + Q] / (4 (x^2 + 1)^2),
//   P = (delta - Dc1)(delta - Dc3),  Q = delta^2 - Dc1^2,
// where Dc1, Dc3 are the critical splittings of the q=1/4 and q=3/4
// subspaces. In y = int_0^x m the problem reads -psi_yy + V2 psi = -alpha kappa^4 psi.

#include <cstddef>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace atpqrm {

constexpr double collapse_alpha(double r) { return 4.0 * r / ((1.0 + r) * (1.0 + r)); }

double mass(double x, double r);
double potential(double x, double delta, double r);

// y(x) = x/alpha - (1-alpha)/alpha^{3/2} atan(sqrt(alpha) x); x(y) its inverse.
double y_of_x(double x, double alpha);
double x_of_y(double y, double alpha);

// V2 as a function of y (inverts y -> x) and of x directly.
double v2(double y, double delta, double r, double kappa);
double v2_at_x(double x, double delta, double r, double kappa);

enum class Region { A, B, C, boundary };
std::string to_string(Region region);

struct TailClass {
  // V2(y) ~ gamma/y^2 + gamma_prime/y^4 from the leading x ~ alpha y, m ~ 1/alpha
  // substitution applied to each bracket of V2.
  double gamma = 0.0;
  double gamma_prime = 0.0;
  Region region = Region::boundary;
  // Which critical splitting a boundary case sits on (1 or 3, 0 otherwise).
  int boundary_of = 0;
};

// kappa > 0 adds kappa^4 (1-alpha)/alpha^2 to gamma.
TailClass tail_coefficients(double delta, double r, double kappa = 0.0);

enum class CountClass { none, finite, infinite };
std::string to_string(CountClass c);
CountClass expected_count_class(const TailClass& t);

struct FaddeevResult {
  bool divergent = false;
  // int |V2^-|(1+|y|) dy over |y| < y_max.
  double value = 0.0;
  double error = 0.0;
  // Fitted A in y(1+y)|V2^-(y)| ~ A + B/y^2 over the last decade; A ~ |gamma|
  // signals logarithmic divergence.
  double tail_constant = 0.0;
  double y_max = 0.0;
};

FaddeevResult faddeev_i1(double delta, double r, double kappa = 0.0, double y_max = 1e6);

struct BrownsteinResult {
  double value = 0.0;
  double error = 0.0;
};

// I2 = int V2(y(x)) / m(x) dx over the real line.
BrownsteinResult brownstein_i2(double delta, double r, double kappa = 0.0);

struct CollapseOptions {
  double L = 200.0;
  double h = 0.01;
  std::size_t k_states = 3;  // per parity sector
  // Automatic enlargement of L (doubling) up to this size.
  double L_max = 6400.0;
  bool auto_enlarge = true;
  // Weight allowed in the outer 10% of the domain.
  double boundary_tolerance = 1e-6;
};

struct BoundState {
  double kappa4 = 0.0;
  double energy = 0.0;  // -1/2 - kappa^2
  Parity parity = Parity::even;  // of psi2 under x -> -x
  double boundary_weight = 0.0;
  // Gap to the nearest other eigenvalue of the discrete operator.
  double gap = 0.0;
  // psi2 on x_i = i h, i = 0..n-1, normalized over the full line.
  std::vector<double> psi;
  double h = 0.0;
  double L = 0.0;
};

struct BoundStateSet {
  std::vector<BoundState> states;  // ascending energy
  // Negative eigenvalues that failed the boundary guard at the largest L, or
  // sit below the noise floor.
  std::size_t unresolved = 0;
  double lowest_eigenvalue = 0.0;  // of the discrete operator, both sectors
  double noise_floor = 0.0;        // 16 eps ||A||
  double L_used = 0.0;
  double h = 0.0;
  TailClass tail;
  CountClass count_class = CountClass::none;

  // Ground energy, or -1/2 if nothing is resolved.
  double ground_energy() const { return states.empty() ? -0.5 : states.front().energy; }
};

// Throws Error(domain_too_small) only when auto_enlarge is off and a negative
// eigenvalue fails the boundary guard.
BoundStateSet solve_bound_states(double delta, double r, const CollapseOptions& opt = {});

struct NondegeneracyReport {
  bool simple = false;       // gap exceeds the solver tolerance
  double gap = 0.0;
  double tolerance = 0.0;
  // ||(-delta/2 + c (x d/dx + 1/2)) psi|| / ||psi|| with c = (1-r)/(1+r).
  double first_order_residual = 0.0;
  bool annihilated = false;
  bool nondegenerate = false;
};

NondegeneracyReport nondegeneracy_check(const BoundState& s, double delta, double r);

// Threshold bounds on kappa^4: kappa^4 (1-alpha) < P/(4 alpha),
// and the stricter form from the consistent x ~ alpha y substitution,
// kappa^4 (1-alpha) < alpha P / 4 (attractive effective tail).
bool satisfies_threshold_bound(double kappa4, double delta, double r);
bool has_attractive_tail(double kappa4, double delta, double r);

}  // namespace atpqrm
