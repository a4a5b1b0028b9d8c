#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "core/collapse.hpp"

using namespace atpqrm;

namespace {

// Shooting from x = 0 for (u'/m)' = (V + k4) u with even or odd start; the
// sign of u(X) flips as k4 crosses an eigenvalue.
double shoot(double k4, double delta, double r, bool even, double X = 25.0, double step = 1e-3) {
  double u = even ? 1.0 : 0.0, w = even ? 0.0 : 1.0;  // w = u'/m
  auto du = [&](double x, double uu, double ww) {
    return std::pair{mass(x, r) * ww, (potential(x, delta, r) + k4) * uu};
  };
  for (double x = 0.0; x < X; x += step) {
    const auto [a1, b1] = du(x, u, w);
    const auto [a2, b2] = du(x + step / 2, u + step / 2 * a1, w + step / 2 * b1);
    const auto [a3, b3] = du(x + step / 2, u + step / 2 * a2, w + step / 2 * b2);
    const auto [a4, b4] = du(x + step, u + step * a3, w + step * b3);
    u += step / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    w += step / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  return u;
}

}  // namespace

TEST_CASE("mass and potential") {
  const double r = 0.25, a = collapse_alpha(r);
  CHECK(a == doctest::Approx(0.64));
  CHECK(mass(0.0, r) == 1.0);
  CHECK(mass(1e8, r) == doctest::Approx(1.0 / a));
  CHECK(mass(1.0, 1.0) == 1.0);
  for (double x : {0.0, 0.3, 2.0, 40.0}) {
    CHECK(mass(x, r) >= 1.0);
    CHECK(mass(-x, r) == mass(x, r));
    // P, Q from Dc1 = 0.6 and Dc3 = 1.8 at r = 1/4.
    const double delta = 1.1, P = (delta - 0.6) * (delta - 1.8), Q = delta * delta - 0.36;
    CHECK(potential(x, delta, r) == doctest::Approx(-(P * x * x + Q) / (4 * std::pow(x * x + 1, 2))));
  }
}

TEST_CASE("y(x) integrates the mass and inverts") {
  for (double r : {0.1, 0.25, 0.6, 1.0}) {
    const double a = collapse_alpha(r);
    for (double x : {0.0, 0.1, 1.0, 7.0, 300.0, 1e5}) {
      const double y = y_of_x(x, a);
      CHECK(x_of_y(y, a) == doctest::Approx(x).epsilon(1e-13).scale(1e-13));
      CHECK(x_of_y(-y, a) == doctest::Approx(-x).epsilon(1e-13).scale(1e-13));
      if (x > 0) {
        const double hstep = 1e-5 * std::max(1.0, x);
        const double dy = (y_of_x(x + hstep, a) - y_of_x(x - hstep, a)) / (2 * hstep);
        CHECK(dy == doctest::Approx(mass(x, r)).epsilon(1e-7));
      }
    }
  }
  CHECK_THROWS_AS(y_of_x(1.0, 0.0), Error);
  CHECK_THROWS_AS(x_of_y(1.0, 1.5), Error);
}

TEST_CASE("V2 in y and in x agree") {
  const double r = 0.25, a = collapse_alpha(r);
  for (double x : {0.0, 0.5, 3.0, 50.0})
    CHECK(v2(y_of_x(x, a), 1.3, r, 0.4) == doctest::Approx(v2_at_x(x, 1.3, r, 0.4)).epsilon(1e-12));
}

TEST_CASE("tail regions at r = 1/4") {
  CHECK(tail_coefficients(0.3, 0.25).region == Region::A);
  CHECK(tail_coefficients(1.0, 0.25).region == Region::B);
  CHECK(tail_coefficients(2.5, 0.25).region == Region::C);
  const auto b1 = tail_coefficients(0.6, 0.25), b3 = tail_coefficients(1.8, 0.25);
  CHECK(b1.region == Region::boundary);
  CHECK(b1.boundary_of == 1);
  CHECK(b3.boundary_of == 3);
  CHECK(expected_count_class(tail_coefficients(0.3, 0.25)) == CountClass::infinite);
  CHECK(expected_count_class(tail_coefficients(1.0, 0.25)) == CountClass::finite);
  CHECK(expected_count_class(tail_coefficients(2.5, 0.25)) == CountClass::infinite);
  CHECK(expected_count_class(b1) == CountClass::none);
  CHECK(expected_count_class(b3) == CountClass::finite);
  CHECK_THROWS_AS(tail_coefficients(1.0, 0.0), Error);
}

TEST_CASE("inverse-square coefficient matches the far tail of V2") {
  for (double delta : {0.3, 1.0, 2.5}) {
    for (double kappa : {0.0, 0.3}) {
      const double r = 0.25;
      const auto t = tail_coefficients(delta, r, kappa);
      const double y = 1e6;
      CHECK(y * y * v2(y, delta, r, kappa) == doctest::Approx(t.gamma).epsilon(1e-4));
      // Attractive tail exactly in regions A and C at kappa = 0.
      if (kappa == 0.0) CHECK((t.gamma < 0) == (t.region != Region::B));
    }
  }
}

TEST_CASE("Brownstein integral: quadratic decomposition and reference values") {
  const double r = 0.25;
  const double m_inf = 1.0 / collapse_alpha(r);
  // Independent quadrature of the two moments on x = tan(t).
  boost::math::quadrature::tanh_sinh<double> ts;
  auto moment = [&](bool x2) {
    return ts.integrate(
        [&](double t) {
          const double x = std::tan(t), c = std::cos(t);
          const double m = mass(x, r);
          return (x2 ? x * x : 1.0) / (std::pow(x * x + 1, 2) * m * m) / (c * c);
        },
        -std::numbers::pi / 2, std::numbers::pi / 2);
  };
  const double A = moment(true), B = moment(false);
  CHECK(m_inf > 1.0);
  for (double delta : {0.2, 0.5, 0.6, 0.7, 1.2, 1.8, 3.0}) {
    const double P = (delta - 0.6) * (delta - 1.8), Q = delta * delta - 0.36;
    const auto i2 = brownstein_i2(delta, r);
    CHECK(i2.value == doctest::Approx(-0.25 * (P * A + Q * B)).epsilon(1e-10).scale(1e-12));
    CHECK(i2.error < 1e-9);
  }
  // mpmath, 30 digits.
  CHECK(brownstein_i2(0.2, r).value == doctest::Approx(-0.030888139).epsilon(1e-7));
  CHECK(brownstein_i2(0.5, r).value == doctest::Approx(0.0085027205).epsilon(1e-7));
  CHECK(std::abs(brownstein_i2(0.6, r).value) < 1e-13);
  CHECK(brownstein_i2(0.7, r).value == doctest::Approx(-0.019319224).epsilon(1e-7));
  CHECK(brownstein_i2(1.2, r).value == doctest::Approx(-0.2781629).epsilon(1e-6));
  CHECK(brownstein_i2(1.8, r).value == doctest::Approx(-0.94571992).epsilon(1e-7));
}

TEST_CASE("Brownstein integral with kappa adds a positive constant") {
  const double r = 0.25, a = collapse_alpha(r), k = 0.5;
  boost::math::quadrature::tanh_sinh<double> ts;
  const double C = ts.integrate(
      [&](double t) {
        const double x = std::tan(t), c = std::cos(t);
        return 1.0 / ((1 + x * x) * mass(x, r)) / (c * c);
      },
      -std::numbers::pi / 2, std::numbers::pi / 2);
  const double shift = brownstein_i2(1.0, r, k).value - brownstein_i2(1.0, r).value;
  CHECK(shift == doctest::Approx(std::pow(k, 4) * (1 - a) * C).epsilon(1e-10));
}

TEST_CASE("Faddeev integral separates finite and divergent tails") {
  for (double delta : {0.2, 0.4, 2.5, 3.0, 5.0}) {
    const auto f = faddeev_i1(delta, 0.25);
    CHECK_MESSAGE(f.divergent, "delta " << delta);
    CHECK(f.tail_constant == doctest::Approx(std::abs(tail_coefficients(delta, 0.25).gamma)).epsilon(1e-3));
  }
  for (double delta : {0.7, 1.2, 1.7}) {
    const auto f = faddeev_i1(delta, 0.25);
    CHECK_MESSAGE(!f.divergent, "delta " << delta);
    // Finite: a larger cutoff barely changes the value.
    const auto g = faddeev_i1(delta, 0.25, 0.0, 1e8);
    CHECK(g.value == doctest::Approx(f.value).epsilon(1e-3));
  }
  CHECK_THROWS_AS(faddeev_i1(1.0, 0.25, 0.0, 5.0), Error);
}

TEST_CASE("bound states against a shooting solution") {
  const double delta = 3.0, r = 0.25;
  CollapseOptions opt;
  opt.L = 100;
  opt.h = 0.01;
  const auto set = solve_bound_states(delta, r, opt);
  REQUIRE(set.states.size() >= 2);
  CHECK(set.count_class == CountClass::infinite);
  const auto& g0 = set.states[0];
  const auto& g1 = set.states[1];
  CHECK(g0.parity == Parity::even);
  CHECK(g1.parity == Parity::odd);
  CHECK(g0.energy == doctest::Approx(-0.5 - std::sqrt(g0.kappa4)));
  CHECK(set.ground_energy() == g0.energy);
  for (const auto* s : {&g0, &g1}) {
    const bool even = s->parity == Parity::even;
    const double lo = shoot(s->kappa4 * (1 - 1e-3), delta, r, even);
    const double hi = shoot(s->kappa4 * (1 + 1e-3), delta, r, even);
    CHECK(lo * hi < 0);
    CHECK(s->boundary_weight < opt.boundary_tolerance);
  }
  for (const auto& s : set.states) {
    CHECK(satisfies_threshold_bound(s.kappa4, delta, r));
    CHECK(has_attractive_tail(s.kappa4, delta, r));
  }
  // Normalized over the full line.
  double norm = g0.psi[0] * g0.psi[0];
  for (std::size_t i = 1; i < g0.psi.size(); ++i) norm += 2 * g0.psi[i] * g0.psi[i];
  CHECK(norm * g0.h == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g1.psi[0] == 0.0);
}

TEST_CASE("bound states converge under grid refinement") {
  CollapseOptions coarse;
  coarse.L = 100;
  coarse.h = 0.02;
  CollapseOptions fine = coarse;
  fine.h = 0.01;
  const auto a = solve_bound_states(3.0, 0.25, coarse), b = solve_bound_states(3.0, 0.25, fine);
  const double da = a.states[0].kappa4, db = b.states[0].kappa4;
  CHECK(std::abs(da - db) < 1e-3 * db);
}

TEST_CASE("bound states are nondegenerate") {
  CollapseOptions opt;
  opt.L = 100;
  const auto set = solve_bound_states(3.0, 0.25, opt);
  for (const auto& s : set.states) {
    const auto rep = nondegeneracy_check(s, 3.0, 0.25);
    CHECK(rep.simple);
    CHECK_FALSE(rep.annihilated);
    CHECK(rep.nondegenerate);
  }
}

TEST_CASE("no bound state at the critical splitting") {
  CollapseOptions opt;
  opt.L = 200;
  const auto set = solve_bound_states(0.6, 0.25, opt);
  CHECK(set.states.empty());
  CHECK(set.lowest_eigenvalue > 0.0);
  CHECK(set.ground_energy() == -0.5);
  CHECK(set.count_class == CountClass::none);
}

TEST_CASE("domain guard without enlargement") {
  CollapseOptions opt;
  opt.L = 2.0;
  opt.h = 0.01;
  opt.auto_enlarge = false;
  try {
    solve_bound_states(3.0, 0.25, opt);
    FAIL("expected domain_too_small");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain_too_small);
  }
}

TEST_CASE("threshold bounds") {
  const double r = 0.25, a = collapse_alpha(r);
  const double P = (3.0 - 0.6) * (3.0 - 1.8);
  const double loose = P / (4 * a * (1 - a)), strict = a * P / (4 * (1 - a));
  CHECK(satisfies_threshold_bound(0.99 * loose, 3.0, r));
  CHECK_FALSE(satisfies_threshold_bound(1.01 * loose, 3.0, r));
  CHECK(has_attractive_tail(0.99 * strict, 3.0, r));
  CHECK_FALSE(has_attractive_tail(1.01 * strict, 3.0, r));
  CHECK(strict < loose);
  // Consistent with the sign of the kappa-dependent tail coefficient.
  const double k = std::pow(0.99 * strict, 0.25);
  CHECK(tail_coefficients(3.0, r, k).gamma < 0);
}
