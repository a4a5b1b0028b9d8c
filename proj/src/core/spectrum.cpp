#include "core/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "core/recurrence.hpp"

namespace atpqrm {

namespace {

// Root of a bracketed sign change, polished until the bracket is below tol.
template <typename F>
double polish(F&& f, double a, double b, double fa, double fb, double tol) {
  std::uintmax_t iters = 200;
  auto stop = [tol](double lo, double hi) { return std::abs(hi - lo) <= tol; };
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  return 0.5 * (lo + hi);
}

bool negative(double v) { return std::signbit(v); }

struct IntervalScan {
  std::vector<double> roots;
  bool resolved = true;
  int samples = 0;
};

template <typename G>
IntervalScan scan_interval(G&& gfun, double a, double b, const LevelOptions& opt) {
  auto sample = [&](int n, std::vector<double>& xs, std::vector<double>& vs) {
    xs.resize(static_cast<std::size_t>(n) + 1);
    vs.resize(xs.size());
    for (int i = 0; i <= n; ++i) {
      xs[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / n;
      vs[static_cast<std::size_t>(i)] = gfun(xs[static_cast<std::size_t>(i)]);
    }
  };
  auto changes = [](const std::vector<double>& vs) {
    int c = 0;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
      if (std::isfinite(vs[i]) && std::isfinite(vs[i + 1]) && negative(vs[i]) != negative(vs[i + 1])) ++c;
    return c;
  };

  IntervalScan out;
  std::vector<double> xs, vs;
  int n = std::max(opt.samples, 2);
  sample(n, xs, vs);
  int prev = changes(vs);
  int stable = 0;
  while (stable < 2) {
    if (2 * n > opt.max_samples) {
      out.resolved = false;
      break;
    }
    n *= 2;
    sample(n, xs, vs);
    const int c = changes(vs);
    stable = (c == prev) ? stable + 1 : 0;
    prev = c;
  }
  out.samples = n;
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    if (!std::isfinite(vs[i]) || !std::isfinite(vs[i + 1]) || negative(vs[i]) == negative(vs[i + 1])) continue;
    if (vs[i] == 0.0) {
      out.roots.push_back(xs[i]);
      continue;
    }
    out.roots.push_back(polish(gfun, xs[i], xs[i + 1], vs[i], vs[i + 1], opt.tol));
  }
  return out;
}

}  // namespace

LevelSet find_levels(const ModelParams& p, double e_lo, double e_hi, const LevelOptions& opt) {
  require(std::isfinite(e_lo) && std::isfinite(e_hi) && e_lo < e_hi, "energy range must be bounded and non-empty");
  require(opt.tol > 0.0 && opt.samples >= 2, "invalid level-search options");
  const BogoliubovFrame f = derive_frame(p);

  LevelSet set;
  set.params = p;
  set.e_lo = e_lo;
  set.e_hi = e_hi;

  std::vector<Parity> parities;
  if (opt.both_parities)
    parities = {Parity::even, Parity::odd};
  else
    parities = {p.parity};

  for (Parity s : parities) {
    ModelParams ps = p;
    ps.parity = s;
    auto gfun = [&](double e) {
      ++set.diagnostics.evaluations;
      try {
        const GEvaluation ev = eval_g(ps, e, opt.g);
        set.diagnostics.max_truncation = std::max(set.diagnostics.max_truncation, ev.truncation_used);
        return ev.value;
      } catch (const PoleProximity&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    for (long n = 0;; ++n) {
      const double upper_pole = pole_energy(n, p.q, f);
      const double lower_pole = n == 0 ? -std::numeric_limits<double>::infinity() : pole_energy(n - 1, p.q, f);
      if (lower_pole >= e_hi) break;
      double a = n == 0 ? std::max(e_lo, opt.e_floor) : std::max(e_lo, lower_pole);
      double b = std::min(e_hi, upper_pole);
      if (!(a < b)) continue;
      // Keep clear of the pole-rejection windows.
      if (a == lower_pole) a += std::max(100.0 * pole_tolerance(a), 1e-10 * f.pole_spacing);
      if (b == upper_pole) b -= std::max(100.0 * pole_tolerance(b), 1e-10 * f.pole_spacing);
      if (!(a < b)) continue;
      IntervalScan sc = scan_interval(gfun, a, b, opt);
      set.diagnostics.max_samples_used = std::max(set.diagnostics.max_samples_used, sc.samples);
      if (!sc.resolved) set.diagnostics.unresolved_intervals.push_back(n);
      if (sc.roots.size() > 1) set.diagnostics.crowded_intervals.emplace_back(s, n);
      for (double e : sc.roots) {
        EnergyLevel lv;
        lv.energy = e;
        lv.q = p.q;
        lv.parity = s;
        lv.pole_interval = n;
        set.levels.push_back(lv);
      }
    }
  }

  // Degenerate pairs sit on pole lines and are invisible to G; label them
  // from sign changes of F_n in a small window around g.
  if (p.r > 0.0 && p.g > 0.0) {
    for (long n = 0;; ++n) {
      const double e = pole_energy(n, p.q, f);
      if (e > e_hi) break;
      if (e < e_lo) continue;
      const double w = opt.degenerate_tol * p.g;
      const double gc = collapse_coupling(p.r);
      const double g_hi = std::min(p.g + w, 0.5 * (p.g + gc));
      const double f_lo = eval_f(p.delta, p.r, p.q, n, p.g - w);
      const double f_hi = eval_f(p.delta, p.r, p.q, n, g_hi);
      const double f_mid = eval_f(p.delta, p.r, p.q, n, p.g);
      if (f_mid == 0.0 || negative(f_lo) != negative(f_hi)) {
        for (Parity s : {Parity::even, Parity::odd}) {
          EnergyLevel lv;
          lv.energy = e;
          lv.q = p.q;
          lv.parity = s;
          lv.pole_interval = n;
          lv.degenerate = true;
          lv.degenerate_with = s == Parity::even ? Parity::odd : Parity::even;
          set.levels.push_back(lv);
        }
      }
    }
  }

  std::stable_sort(set.levels.begin(), set.levels.end(), [](const EnergyLevel& x, const EnergyLevel& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return sign(x.parity) > sign(y.parity);
  });
  return set;
}

std::vector<DegeneratePoint> find_degenerate_points(double delta, double r, Bargmann q, long n, double g_lo,
                                                    double g_hi, const DegenerateOptions& opt) {
  require(r > 0.0, "degenerate points need r > 0");
  const double gc = collapse_coupling(r);
  require(g_lo > 0.0 && g_lo < g_hi && g_hi < gc, "g range must lie inside (0, g_c)");
  require(opt.samples >= 2, "need at least 2 samples");
  auto F = [&](double g) { return eval_f(delta, r, q, n, g); };
  std::vector<DegeneratePoint> out;
  double prev_g = g_lo, prev_v = F(g_lo);
  for (int i = 1; i <= opt.samples; ++i) {
    const double g = g_lo + (g_hi - g_lo) * static_cast<double>(i) / opt.samples;
    const double v = F(g);
    if (std::isfinite(v) && std::isfinite(prev_v) && negative(v) != negative(prev_v)) {
      const double root = prev_v == 0.0 ? prev_g : polish(F, prev_g, g, prev_v, v, opt.tol * gc);
      ModelParams p;
      p.delta = delta;
      p.r = r;
      p.g = root;
      p.q = q;
      out.push_back({n, root, pole_energy(n, p), q});
    }
    prev_g = g;
    prev_v = v;
  }
  return out;
}

double last_crossing(double delta, double r, Bargmann q, long n, double margin, const DegenerateOptions& opt) {
  const double gc = collapse_coupling(r);
  const auto pts = find_degenerate_points(delta, r, q, n, 1e-6 * gc, gc * (1.0 - margin), opt);
  if (pts.empty())
    throw Error(ErrorCode::no_crossing, "F_" + std::to_string(n) + " has no root below g_c");
  return pts.back().g;
}

double g_from_x(double x, double g_c) { return g_c * (-std::expm1(-x * std::log(10.0))); }

double x_from_g(double g, double g_c) { return -std::log10(1.0 - g / g_c); }

ExceptionalScan count_bound_states_via_exceptional(const ModelParams& p, long m,
                                                   const ExceptionalScanOptions& opt) {
  validate(p);
  require(m >= 0, "pole index must be >= 0");
  require(!opt.x_grid.empty() && !opt.truncations.empty(), "x grid and truncation ladder must be non-empty");
  for (std::size_t i = 0; i < opt.x_grid.size(); ++i) {
    require(opt.x_grid[i] > 0.0, "x must be positive");
    if (i > 0) require(opt.x_grid[i] > opt.x_grid[i - 1], "x grid must be ascending");
  }
  const double gc = collapse_coupling(p.r);
  ExceptionalScan scan;
  scan.precision_floor = opt.x_grid.back() > 15.0;

  for (long N : opt.truncations) {
    require(N > m, "truncation must exceed the pole index");
    GOptions go;
    go.truncation = N;
    go.tol = opt.tol;
    go.precision = opt.precision;
    auto G = [&](double x, bool* conv) {
      ModelParams q = p;
      q.g = g_from_x(x, gc);
      try {
        const GEvaluation ev = eval_g_exceptional(q, m, go);
        if (conv) *conv = ev.converged;
        return ev.value;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::coupling_at_or_above_critical) throw;
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    ExceptionalCount cnt;
    cnt.truncation = N;
    for (double x : opt.x_grid) {
      bool conv = false;
      cnt.values.push_back(G(x, &conv));
      cnt.converged.push_back(conv ? 1 : 0);
    }
    auto Gx = [&](double x) { return G(x, nullptr); };
    for (std::size_t i = 0; i + 1 < cnt.values.size(); ++i) {
      const double va = cnt.values[i], vb = cnt.values[i + 1];
      if (!std::isfinite(va) || !std::isfinite(vb) || negative(va) == negative(vb)) continue;
      const double x = va == 0.0 ? opt.x_grid[i] : polish(Gx, opt.x_grid[i], opt.x_grid[i + 1], va, vb, opt.x_tol);
      cnt.zeros.push_back({x, g_from_x(x, gc), cnt.converged[i] && cnt.converged[i + 1]});
    }
    scan.per_truncation.push_back(std::move(cnt));
  }
  return scan;
}

SpacingFit fit_exponential_spacing(const std::vector<double>& zeros_g, double g_c, long first_index) {
  if (zeros_g.size() < 3)
    throw Error(ErrorCode::insufficient_points, "spacing fit needs at least 3 zeros");
  require(g_c > 0.0, "g_c must be positive");
  const std::size_t k = zeros_g.size();
  std::vector<double> m(k), z(k);
  for (std::size_t i = 0; i < k; ++i) {
    require(zeros_g[i] > 0.0 && zeros_g[i] < g_c, "zeros must lie in (0, g_c)");
    m[i] = static_cast<double>(first_index + static_cast<long>(i));
    z[i] = -std::log1p(-zeros_g[i] / g_c);
  }
  double sm = 0, sz = 0, smm = 0, smz = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sm += m[i];
    sz += z[i];
    smm += m[i] * m[i];
    smz += m[i] * z[i];
  }
  const double kk = static_cast<double>(k);
  const double slope = (kk * smz - sm * sz) / (kk * smm - sm * sm);
  const double intercept = (sz - slope * sm) / kk;
  SpacingFit fit;
  fit.mu = slope;
  fit.mu0 = -intercept;
  for (std::size_t i = 0; i < k; ++i) {
    const double res = z[i] - (slope * m[i] + intercept);
    fit.residuals.push_back(res);
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(res));
  }
  fit.mean_spacing = (z.back() - z.front()) / (kk - 1.0);
  return fit;
}

std::vector<double> scale_spectrum(const std::vector<EnergyLevel>& levels, const ModelParams& p) {
  const BogoliubovFrame f = derive_frame(p);
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& lv : levels) out.push_back(scaled_energy(lv.energy, lv.q, f));
  return out;
}

}  // namespace atpqrm
