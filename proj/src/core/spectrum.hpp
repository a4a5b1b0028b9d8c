#pragma once

// Assembly of the discrete spectrum from G-function zeros, degenerate points
// from F_n, and bound-state counting from the exceptional G-function.

#include <optional>
#include <utility>
#include <vector>

#include "core/gfunction.hpp"
#include "core/model.hpp"

namespace atpqrm {

struct EnergyLevel {
  double energy = 0.0;
  Bargmann q = Bargmann::quarter;
  Parity parity = Parity::even;
  // n with E_{n-1}^pole < E < E_n^pole; 0 means below the lowest pole line.
  long pole_interval = 0;
  bool degenerate = false;
  std::optional<Parity> degenerate_with;
};

struct LevelOptions {
  GOptions g;                   // truncation/tolerance of each G evaluation
  double tol = 1e-12;           // root width in E
  int samples = 64;             // initial samples per pole interval
  int max_samples = 8192;
  double e_floor = -5.5;        // lower end of the below-first-pole scan
  bool both_parities = true;    // otherwise only p.parity
  // A sign change of F_n within g(1 -/+ degenerate_tol) marks a degenerate
  // pair on pole line n.
  double degenerate_tol = 1e-9;
};

struct LevelDiagnostics {
  std::vector<long> unresolved_intervals;  // pole_interval indices
  // (parity, pole_interval) pairs holding more than one level.
  std::vector<std::pair<Parity, long>> crowded_intervals;
  long max_truncation = 0;
  int max_samples_used = 0;
  long evaluations = 0;
};

struct LevelSet {
  ModelParams params;
  double e_lo = 0.0, e_hi = 0.0;
  std::vector<EnergyLevel> levels;  // ascending energy
  LevelDiagnostics diagnostics;
};

LevelSet find_levels(const ModelParams& p, double e_lo, double e_hi, const LevelOptions& opt = {});

struct DegeneratePoint {
  long n = 0;
  double g = 0.0;
  double energy = 0.0;  // E_n^pole at g
  Bargmann q = Bargmann::quarter;
};

struct DegenerateOptions {
  int samples = 400;
  double tol = 1e-13;
};

std::vector<DegeneratePoint> find_degenerate_points(double delta, double r, Bargmann q, long n, double g_lo,
                                                    double g_hi, const DegenerateOptions& opt = {});

// Largest root of F_n in (0, g_c(1 - margin)); throws Error(no_crossing).
double last_crossing(double delta, double r, Bargmann q, long n, double margin = 1e-9,
                     const DegenerateOptions& opt = {});

// Zeros of the exceptional G-function on pole line m, scanned in
// x = -log10(1 - g/g_c).
struct ExceptionalScanOptions {
  std::vector<double> x_grid;       // ascending, x > 0
  std::vector<long> truncations;    // ladder
  double tol = 1e-12;               // G tolerance (early stop)
  double x_tol = 1e-10;             // root width in x
  Precision precision = Precision::standard;
};

struct ExceptionalZero {
  double x = 0.0;
  double g = 0.0;
  // Both bracketing grid values had a converged series; unconverged zeros
  // may still move when the truncation grows.
  bool converged = false;
};

struct ExceptionalCount {
  long truncation = 0;
  std::vector<ExceptionalZero> zeros;  // ascending in g
  // G values on the grid (same order as x_grid).
  std::vector<double> values;
  std::vector<char> converged;
};

struct ExceptionalScan {
  std::vector<ExceptionalCount> per_truncation;
  // Set when the grid asks for 1 - g/g_c < 1e-15 under double precision.
  bool precision_floor = false;
};

double g_from_x(double x, double g_c);
double x_from_g(double g, double g_c);

ExceptionalScan count_bound_states_via_exceptional(const ModelParams& p, long m,
                                                   const ExceptionalScanOptions& opt);

struct SpacingFit {
  double mu = 0.0;
  double mu0 = 0.0;
  std::vector<double> residuals;  // of -log(1 - g_m/g_c) about m mu - mu0
  double max_abs_residual = 0.0;
  double mean_spacing = 0.0;
};

// Least-squares fit g_m = g_c [1 - exp(-m mu + mu0)], m = first_index, ...
// Throws Error(insufficient_points) for fewer than 3 zeros.
SpacingFit fit_exponential_spacing(const std::vector<double>& zeros_g, double g_c, long first_index = 1);

// E' = (E + 1/2)/(2 beta_+ beta_-) - q.
std::vector<double> scale_spectrum(const std::vector<EnergyLevel>& levels, const ModelParams& p);

}  // namespace atpqrm
