#pragma once

#include "core/model.hpp"

namespace atpqrm {

enum class Precision { standard, extended };  // double, long double
enum class Summation { compensated, naive };

struct GOptions {
  long truncation = 0;  // 0 selects max(2 N*, 1000)
  double tol = 1e-12;
  Precision precision = Precision::standard;
  Summation summation = Summation::compensated;
  // Stop before the truncation once the geometric tail estimate drops below
  // 1e-3 * tol relative to the partial sum.
  bool early_stop = true;
};

struct GEvaluation {
  double value = 0.0;
  long truncation_used = 0;
  // Geometric estimate of the omitted tail, |t_N| rho/(1-rho), where t_N is the
  // last increment and rho the largest recent term ratio; infinite when the
  // terms are not yet decaying.
  double tail_estimate = 0.0;
  bool converged = false;
  double pole_distance = 0.0;
  // Separate sums of Lambda_n and xi_n (value = sum_lambda +/- sum_xi).
  double sum_lambda = 0.0;
  double sum_xi = 0.0;
};

long default_truncation(const ModelParams& p, double energy);

// Regular G-function G_{+/-}^{(q)}(E), parity taken from p. Throws
// PoleProximity inside the rejection window around a pole line.
GEvaluation eval_g(const ModelParams& p, double energy, const GOptions& opt = {});

// Exceptional G-function on pole line m as a function of p.g: the recurrence
// restarted from e_m = 1 with E pinned to E_m^pole.
GEvaluation eval_g_exceptional(const ModelParams& p, long m, const GOptions& opt = {});

// F_n^{(q)}(g): vanishes where a doubly degenerate level sits on the n-th
// pole line. Needs r > 0 and 0 < g < g_c.
double eval_f(double delta, double r, Bargmann q, long n, double g);

// F_n at g = g_c, built from the collapse coefficients f_i^c.
double eval_f_at_collapse(double delta, double r, Bargmann q, long n);

// [(1+r)^2 / (8r)]^n, the natural scale of F_n(g_c).
double collapse_f_scale(double r, long n);

}  // namespace atpqrm
