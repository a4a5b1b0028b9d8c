#include "core/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "core/linalg.hpp"

namespace atpqrm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Splittings {
  double c1, c3, P, Q;
};

Splittings splittings(double delta, double r) {
  Splittings s;
  s.c1 = critical_splitting(Bargmann::quarter, r);
  s.c3 = critical_splitting(Bargmann::three_quarters, r);
  s.P = (delta - s.c1) * (delta - s.c3);
  s.Q = delta * delta - s.c1 * s.c1;
  return s;
}

void check_collapse_args(double delta, double r) {
  require(std::isfinite(delta) && delta >= 0.0, "delta must be finite and >= 0");
  require(std::isfinite(r) && r > 0.0, "collapse analysis needs r > 0");
}

// Half-line sector operator. Even: unknowns at x_0..x_{M-1} with the x_0 row
// symmetrized by sqrt(2); odd: x_1..x_{M-1}. Dirichlet at x_M = L.
linalg::SymmetricTridiagonal sector_matrix(double delta, double r, double h, std::size_t M, Parity s) {
  const std::size_t first = s == Parity::even ? 0 : 1;
  const std::size_t n = M - first;
  std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
  const double ih2 = 1.0 / (h * h);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k + first;
    const double x = static_cast<double>(i) * h;
    const double right = 1.0 / mass(x + 0.5 * h, r);
    const double left = 1.0 / mass(std::abs(x - 0.5 * h), r);
    diag[k] = (left + right) * ih2 + potential(x, delta, r);
    if (k + 1 < n) off[k] = -right * ih2;
  }
  if (s == Parity::even && n > 1) off[0] *= std::sqrt(2.0);
  return {std::move(diag), std::move(off)};
}

struct Candidate {
  double lambda;
  Parity s;
  std::vector<double> psi;  // full-line unit normalization, half grid
  double weight;
};

struct SectorSolve {
  std::vector<double> eigen[2];  // lowest k+1 per sector
  std::vector<Candidate> candidates;
  std::size_t below_floor = 0;
  double noise_floor = 0.0;
  double lowest = 0.0;
};

SectorSolve solve_at(double delta, double r, double L, const CollapseOptions& opt) {
  const auto M = static_cast<std::size_t>(std::llround(L / opt.h));
  require(M >= 8, "domain too small for the grid spacing");
  SectorSolve out;
  out.lowest = std::numeric_limits<double>::infinity();
  const std::size_t edge = static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(M)));
  for (Parity s : {Parity::even, Parity::odd}) {
    const auto T = sector_matrix(delta, r, opt.h, M, s);
    const double floor = 16.0 * kEps * T.norm_inf();
    out.noise_floor = std::max(out.noise_floor, floor);
    auto& ev = out.eigen[s == Parity::even ? 0 : 1];
    ev = T.lowest_eigenvalues(std::min(opt.k_states + 1, T.size()), floor / 16.0);
    out.lowest = std::min(out.lowest, ev.front());
    const std::size_t first = s == Parity::even ? 0 : 1;
    for (std::size_t i = 0; i < std::min(opt.k_states, ev.size()); ++i) {
      if (ev[i] >= 0.0) break;
      if (-ev[i] <= floor) {
        ++out.below_floor;
        continue;
      }
      std::vector<double> v = T.eigenvector(ev[i]);
      // Back to point values with sum over the full line equal to one.
      std::vector<double> psi(M, 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) {
        const std::size_t idx = k + first;
        psi[idx] = (idx == 0) ? v[k] : v[k] / std::sqrt(2.0);
      }
      double w = 0.0;
      for (std::size_t idx = std::max<std::size_t>(edge, 1); idx < M; ++idx) w += 2.0 * psi[idx] * psi[idx];
      out.candidates.push_back({ev[i], s, std::move(psi), w});
    }
  }
  return out;
}

}  // namespace

double mass(double x, double r) {
  const double a = collapse_alpha(r);
  const double x2 = x * x;
  return (x2 + 1.0) / (a * x2 + 1.0);
}

double potential(double x, double delta, double r) {
  const Splittings s = splittings(delta, r);
  const double x2 = x * x;
  const double d = x2 + 1.0;
  return -0.25 * (s.P * x2 + s.Q) / (d * d);
}

double y_of_x(double x, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  if (alpha == 1.0) return x;
  const double sa = std::sqrt(alpha);
  return x / alpha - (1.0 - alpha) / (alpha * sa) * std::atan(sa * x);
}

double x_of_y(double y, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  if (alpha == 1.0 || y == 0.0) return y;
  if (y < 0.0) return -x_of_y(-y, alpha);
  // m >= 1 and m <= 1/alpha bracket the root in [alpha y, y].
  auto f = [alpha, y](double x) {
    const double x2 = x * x;
    return std::make_pair(y_of_x(x, alpha) - y, (x2 + 1.0) / (alpha * x2 + 1.0));
  };
  std::uintmax_t iters = 200;
  return boost::math::tools::newton_raphson_iterate(f, alpha * y, alpha * y, y,
                                                    std::numeric_limits<double>::digits - 2, iters);
}

double v2_at_x(double x, double delta, double r, double kappa) {
  const double a = collapse_alpha(r);
  const double x2 = x * x;
  const double k4 = kappa * kappa * kappa * kappa;
  return potential(x, delta, r) / mass(x, r) + k4 * (1.0 - a) / (1.0 + x2);
}

double v2(double y, double delta, double r, double kappa) {
  check_collapse_args(delta, r);
  return v2_at_x(x_of_y(y, collapse_alpha(r)), delta, r, kappa);
}

std::string to_string(Region region) {
  switch (region) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::boundary: return "boundary";
  }
  return "?";
}

std::string to_string(CountClass c) {
  switch (c) {
    case CountClass::none: return "none";
    case CountClass::finite: return "finite";
    case CountClass::infinite: return "infinite";
  }
  return "?";
}

TailClass tail_coefficients(double delta, double r, double kappa) {
  check_collapse_args(delta, r);
  const double a = collapse_alpha(r);
  const Splittings s = splittings(delta, r);
  TailClass t;
  const double k4 = std::pow(kappa, 4);
  t.gamma = -s.P / (4.0 * a) + k4 * (1.0 - a) / (a * a);
  t.gamma_prime = -s.Q / (4.0 * a * a * a);
  const double tol = 1e-12 * std::max(1.0, std::abs(delta));
  if (std::abs(delta - s.c1) <= tol) {
    t.region = Region::boundary;
    t.boundary_of = 1;
  } else if (std::abs(delta - s.c3) <= tol) {
    t.region = Region::boundary;
    t.boundary_of = 3;
  } else if (delta < s.c1) {
    t.region = Region::A;
  } else if (delta < s.c3) {
    t.region = Region::B;
  } else {
    t.region = Region::C;
  }
  return t;
}

CountClass expected_count_class(const TailClass& t) {
  switch (t.region) {
    case Region::A:
    case Region::C: return CountClass::infinite;
    case Region::B: return CountClass::finite;
    case Region::boundary: return t.boundary_of == 1 ? CountClass::none : CountClass::finite;
  }
  return CountClass::none;
}

FaddeevResult faddeev_i1(double delta, double r, double kappa, double y_max) {
  check_collapse_args(delta, r);
  require(y_max > 10.0, "y_max must exceed 10");
  const double a = collapse_alpha(r);
  const Splittings s = splittings(delta, r);
  const double K = std::pow(kappa, 4) * (1.0 - a);
  const double X = x_of_y(y_max, a);

  // Sign changes of V2 in u = x^2: (1+u)^3 V2 = -(P u + Q)(a u + 1)/4 + K (1+u)^2.
  std::vector<double> cuts{0.0};
  {
    const double qa = -s.P * a / 4.0 + K;
    const double qb = -(s.P + s.Q * a) / 4.0 + 2.0 * K;
    const double qc = -s.Q / 4.0 + K;
    std::vector<double> us;
    if (std::abs(qa) > 1e-300) {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        us.push_back((-qb - sq) / (2.0 * qa));
        us.push_back((-qb + sq) / (2.0 * qa));
      }
    } else if (std::abs(qb) > 1e-300) {
      us.push_back(-qc / qb);
    }
    for (double u : us)
      if (u > 0.0 && std::sqrt(u) < X) cuts.push_back(std::sqrt(u));
  }
  for (double d = 1.0; d < X; d *= 10.0) cuts.push_back(d);
  cuts.push_back(X);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double x) {
    const double v = v2_at_x(x, delta, r, kappa);
    if (v >= 0.0) return 0.0;
    return -v * (1.0 + y_of_x(x, a)) * mass(x, r);
  };
  FaddeevResult res;
  res.y_max = y_max;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    res.value += 2.0 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1],
                                                                                    15, 1e-10, &err);
    res.error += 2.0 * err;
  }

  // Least-squares fit t(y) = A + B/y^2 over the last decade.
  constexpr int kSamples = 17;
  double s1 = 0, sz = 0, szz = 0, st = 0, szt = 0, tmax = 0;
  for (int j = 0; j < kSamples; ++j) {
    const double y = y_max * std::pow(10.0, -1.0 + static_cast<double>(j) / (kSamples - 1));
    const double v = v2_at_x(x_of_y(y, a), delta, r, kappa);
    const double t = v < 0.0 ? -v * y * (1.0 + y) : 0.0;
    const double z = 1.0 / (y * y);
    s1 += 1;
    sz += z;
    szz += z * z;
    st += t;
    szt += z * t;
    tmax = std::max(tmax, t);
  }
  const double det = s1 * szz - sz * sz;
  const double A = det != 0.0 ? (szz * st - sz * szt) / det : st / s1;
  res.tail_constant = A;
  res.divergent = tmax > 0.0 && A > 1e-14 && A > 0.5 * tmax;
  return res;
}

BrownsteinResult brownstein_i2(double delta, double r, double kappa) {
  check_collapse_args(delta, r);
  auto f = [&](double x) { return v2_at_x(x, delta, r, kappa) / mass(x, r); };
  BrownsteinResult res;
  double err = 0.0;
  const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13, &err);
  if (!std::isfinite(half) || !std::isfinite(err))
    throw Error(ErrorCode::quadrature_failure, "Brownstein integral did not converge");
  res.value = 2.0 * half;
  res.error = 2.0 * err;
  return res;
}

BoundStateSet solve_bound_states(double delta, double r, const CollapseOptions& opt) {
  check_collapse_args(delta, r);
  require(opt.L > 0.0 && opt.h > 0.0 && opt.h < opt.L, "need 0 < h < L");
  require(opt.k_states >= 1, "k_states must be >= 1");
  require(opt.boundary_tolerance > 0.0, "boundary tolerance must be positive");

  double L = opt.L;
  SectorSolve sol;
  std::size_t prev_pass = 0;
  bool first = true;
  for (;;) {
    sol = solve_at(delta, r, L, opt);
    std::size_t pass = 0, fail = 0;
    const Candidate* ground = nullptr;
    for (const auto& c : sol.candidates) {
      (c.weight <= opt.boundary_tolerance ? pass : fail)++;
      if (!ground || c.lambda < ground->lambda) ground = &c;
    }
    if (fail == 0) break;
    if (!opt.auto_enlarge)
      throw Error(ErrorCode::domain_too_small,
                  "bound state leaks into the outer 10% of the domain at L=" + std::to_string(L));
    const bool ground_fails = ground && ground->weight > opt.boundary_tolerance;
    if (2.0 * L > opt.L_max * (1.0 + 1e-12)) break;
    if (!first && !ground_fails && pass <= prev_pass) break;
    prev_pass = pass;
    first = false;
    L *= 2.0;
  }

  BoundStateSet out;
  out.L_used = L;
  out.h = opt.h;
  out.noise_floor = sol.noise_floor;
  out.lowest_eigenvalue = sol.lowest;
  out.tail = tail_coefficients(delta, r);
  out.count_class = expected_count_class(out.tail);
  out.unresolved = sol.below_floor;
  const double scale = 1.0 / std::sqrt(opt.h);
  for (auto& c : sol.candidates) {
    if (c.weight > opt.boundary_tolerance) {
      ++out.unresolved;
      continue;
    }
    BoundState b;
    b.kappa4 = -c.lambda;
    b.energy = -0.5 - std::sqrt(b.kappa4);
    b.parity = c.s;
    b.boundary_weight = c.weight;
    b.gap = std::numeric_limits<double>::infinity();
    for (const auto& ev : sol.eigen)
      for (double e : ev)
        if (e != c.lambda) b.gap = std::min(b.gap, std::abs(e - c.lambda));
    b.psi = std::move(c.psi);
    for (double& v : b.psi) v *= scale;
    b.h = opt.h;
    b.L = L;
    out.states.push_back(std::move(b));
  }
  std::sort(out.states.begin(), out.states.end(),
            [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
  return out;
}

NondegeneracyReport nondegeneracy_check(const BoundState& s, double delta, double r) {
  check_collapse_args(delta, r);
  require(s.psi.size() >= 3 && s.h > 0.0, "bound state carries no wavefunction");
  NondegeneracyReport rep;
  rep.gap = s.gap;
  rep.tolerance = 16.0 * kEps * 4.0 / (s.h * s.h);
  rep.simple = s.gap > rep.tolerance;

  const double c = (1.0 - r) / (1.0 + r);
  const auto& u = s.psi;
  const double sgn = s.parity == Parity::even ? 1.0 : -1.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double left = i == 0 ? sgn * u[1] : u[i - 1];
    const double du = (u[i + 1] - left) / (2.0 * s.h);
    const double x = static_cast<double>(i) * s.h;
    const double o = -0.5 * delta * u[i] + c * (x * du + 0.5 * u[i]);
    num += o * o;
    den += u[i] * u[i];
  }
  const double scale = std::max(0.5 * delta + 0.5 * c, 1e-300);
  rep.first_order_residual = den > 0.0 ? std::sqrt(num / den) : 0.0;
  rep.annihilated = rep.first_order_residual < 1e-6 * scale || (delta == 0.0 && c == 0.0);
  // A parity partner would need psi2 in the kernel of the first-order
  // operator, which only happens at threshold with delta = Dc1.
  rep.nondegenerate = rep.simple && !rep.annihilated;
  return rep;
}

bool satisfies_threshold_bound(double kappa4, double delta, double r) {
  const double a = collapse_alpha(r);
  const Splittings s = splittings(delta, r);
  return kappa4 * (1.0 - a) < s.P / (4.0 * a);
}

bool has_attractive_tail(double kappa4, double delta, double r) {
  const double a = collapse_alpha(r);
  const Splittings s = splittings(delta, r);
  return kappa4 * (1.0 - a) < a * s.P / 4.0;
}

}  // namespace atpqrm
