#include <doctest.h>

#include <array>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>

#include "core/gfunction.hpp"
#include "core/recurrence.hpp"

using namespace atpqrm;

namespace {

ModelParams params(double delta, double r, double g, Bargmann q = Bargmann::quarter,
                   Parity par = Parity::even) {
  ModelParams p;
  p.delta = delta;
  p.r = r;
  p.g = g;
  p.q = q;
  p.parity = par;
  return p;
}

// Fock-space diagonalisation of the same point, 1500 photons, run once offline.
constexpr std::array<double, 9> kLevels = {
    -0.25134388709114, 0.19827751582002, 1.79293022698475, 1.97856457431414, 3.67534034129993,
    3.99599796447029,  5.34013241109403, 6.25549301800875, 7.01599352865289};

double factorial(long n) { return std::tgamma(static_cast<double>(n) + 1.0); }

}  // namespace

TEST_CASE("each reference level is a zero of exactly one G-function") {
  for (double E : kLevels) {
    int hits = 0;
    for (Bargmann q : {Bargmann::quarter, Bargmann::three_quarters}) {
      for (Parity par : {Parity::even, Parity::odd}) {
        const auto p = params(0.5, 0.2, 0.2, q, par);
        const double lo = eval_g(p, E - 1e-9).value, hi = eval_g(p, E + 1e-9).value;
        if (lo * hi < 0) {
          ++hits;
          // Bracket tightly and compare the root itself.
          std::uintmax_t it = 100;
          auto [a, b] = boost::math::tools::toms748_solve(
              [&](double x) { return eval_g(p, x).value; }, E - 1e-9, E + 1e-9, lo, hi,
              boost::math::tools::eps_tolerance<double>(50), it);
          CHECK(std::abs(0.5 * (a + b) - E) < 1e-12);
        }
      }
    }
    CHECK_MESSAGE(hits == 1, "level " << E);
  }
}

TEST_CASE("parity sectors share the two partial sums") {
  const auto pe = params(0.9, 0.4, 0.5, Bargmann::three_quarters, Parity::even);
  const auto po = params(0.9, 0.4, 0.5, Bargmann::three_quarters, Parity::odd);
  for (double E : {-0.3, 0.7, 2.9, 6.1}) {
    const auto a = eval_g(pe, E), b = eval_g(po, E);
    CHECK(a.sum_lambda == doctest::Approx(b.sum_lambda).epsilon(1e-14));
    CHECK(a.sum_xi == doctest::Approx(b.sum_xi).epsilon(1e-14));
    CHECK(a.value == doctest::Approx(a.sum_lambda + a.sum_xi).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(b.sum_lambda - b.sum_xi).epsilon(1e-12));
  }
}

TEST_CASE("summation and precision variants agree") {
  const auto p = params(0.5, 0.2, 0.2);
  for (double E : {-0.6, 0.5, 3.3}) {
    GOptions naive;
    naive.summation = Summation::naive;
    GOptions ext;
    ext.precision = Precision::extended;
    const auto c = eval_g(p, E), n = eval_g(p, E, naive), x = eval_g(p, E, ext);
    CHECK(c.converged);
    CHECK(std::abs(c.value - n.value) < 1e-13 * std::max(1.0, std::abs(c.value)));
    CHECK(std::abs(c.value - x.value) < 1e-12 * std::max(1.0, std::abs(c.value)));
  }
}

TEST_CASE("convergence diagnostics") {
  const auto p = params(0.5, 0.25, 0.7);
  const auto ev = eval_g(p, 2.0);
  CHECK(ev.converged);
  CHECK(ev.tail_estimate < 1e-12 * std::max(1.0, std::abs(ev.value)));
  CHECK(ev.truncation_used <= default_truncation(p, 2.0));

  GOptions short_run;
  short_run.truncation = 3;
  short_run.early_stop = false;
  const auto cut = eval_g(params(0.5, 0.25, 0.79), 2.0, short_run);
  CHECK_FALSE(cut.converged);
  CHECK(cut.truncation_used == 3);
}

TEST_CASE("G diverges with opposite signs across a pole") {
  const auto p = params(0.5, 0.2, 0.4);
  const double E2 = pole_energy(2, p);
  CHECK_THROWS_AS(eval_g(p, E2), PoleProximity);
  const double below = eval_g(p, E2 - 1e-6).value, above = eval_g(p, E2 + 1e-6).value;
  CHECK(below * above < 0);
  CHECK(std::abs(below) > 1e3);
  CHECK(std::abs(above) > 1e3);
  CHECK(eval_g(p, E2 + 1e-6).pole_distance == doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("exceptional G-function is the residue of the regular one") {
  // Near pole line m the regular series is dominated by the term forced at m,
  // so G(E) (E - E_m) tends to a common constant times the exceptional series
  // for both parities. The parity ratio removes the constant; averaging the
  // two sides of the pole removes the first-order offset.
  for (long m : {0L, 1L, 3L}) {
    const auto pe = params(2.0, 0.5, 0.4, Bargmann::quarter, Parity::even);
    const auto po = params(2.0, 0.5, 0.4, Bargmann::quarter, Parity::odd);
    const double Em = pole_energy(m, pe);
    auto ratio = [&](double d) { return eval_g(pe, Em + d).value / eval_g(po, Em + d).value; };
    const double ratio_reg = 0.5 * (ratio(1e-8) + ratio(-1e-8));
    const auto xe = eval_g_exceptional(pe, m), xo = eval_g_exceptional(po, m);
    CHECK(xe.converged);
    CHECK(ratio_reg == doctest::Approx(xe.value / xo.value).epsilon(1e-7));
    CHECK(xe.value == doctest::Approx(xe.sum_lambda + xe.sum_xi).epsilon(1e-12));
    CHECK(xo.value == doctest::Approx(xo.sum_lambda - xo.sum_xi).epsilon(1e-12));
    CHECK(xe.pole_distance == 0.0);
  }
  CHECK_THROWS_AS(eval_g_exceptional(params(5.0, 0.25, 0.5), -1), Error);
  GOptions o;
  o.truncation = 3;
  CHECK_THROWS_AS(eval_g_exceptional(params(5.0, 0.25, 0.5), 3, o), Error);
}

TEST_CASE("F_0 has its root at the crossing coupling") {
  for (double r : {0.1, 0.2, 0.5}) {
    for (Bargmann q : {Bargmann::quarter, Bargmann::three_quarters}) {
      const double delta = 0.3;
      const auto c = crossing_point(q, delta, r);
      if (!(c.g0 < collapse_coupling(r))) continue;
      CHECK(std::abs(eval_f(delta, r, q, 0, c.g0)) < 1e-13);
      CHECK(eval_f(delta, r, q, 0, 0.5 * c.g0) > 0);
    }
  }
}

TEST_CASE("F_n toward g_c") {
  // The limit from below exists and vanishes at the critical splitting. For
  // n >= 1 it is not the collapse-coefficient value: e_i grows like
  // 1/beta_+ on a pole line, so beta_+ e_i leaves a finite trace in f_{i+1}.
  const double r = 0.25, gc = collapse_coupling(r);
  for (long n : {0L, 1L, 3L, 6L}) {
    const double a = eval_f(1.1, r, Bargmann::quarter, n, gc * (1 - 1e-8));
    const double b = eval_f(1.1, r, Bargmann::quarter, n, gc * (1 - 1e-10));
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    CHECK(std::abs(eval_f(0.6, r, Bargmann::quarter, n, gc * (1 - 1e-10))) < 1e-8);
  }
  CHECK(eval_f(1.1, r, Bargmann::quarter, 0, gc * (1 - 1e-12)) ==
        doctest::Approx(eval_f_at_collapse(1.1, r, Bargmann::quarter, 0)).epsilon(1e-10));
}

TEST_CASE("F_n at collapse vanishes at the critical splitting") {
  for (double r : {0.1, 0.25, 0.5}) {
    for (Bargmann q : {Bargmann::quarter, Bargmann::three_quarters}) {
      const double dc = critical_splitting(q, r);
      for (long n = 0; n <= 30; ++n)
        CHECK(std::abs(eval_f_at_collapse(dc, r, q, n)) < 1e-12 * std::max(1.0, collapse_f_scale(r, n)));
    }
  }
}

TEST_CASE("F_n at collapse has slope (1/2)[(1+r)^2/(8r)]^n / n!") {
  // F_n(g_c) is affine in delta; binomial theorem gives the slope.
  for (double r : {0.1, 0.25, 0.5}) {
    for (long n = 0; n <= 8; ++n) {
      const double slope = eval_f_at_collapse(1.0, r, Bargmann::quarter, n) -
                           eval_f_at_collapse(0.0, r, Bargmann::quarter, n);
      const double want = 0.5 * collapse_f_scale(r, n) / factorial(n);
      CHECK(slope == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("F_n argument checks") {
  CHECK_THROWS_AS(eval_f(0.5, 0.0, Bargmann::quarter, 1, 0.3), Error);
  CHECK_THROWS_AS(eval_f(0.5, 0.2, Bargmann::quarter, -1, 0.3), Error);
  CHECK_THROWS_AS(eval_f(0.5, 0.2, Bargmann::quarter, 1, 0.0), Error);
  CHECK_THROWS_AS(eval_f(0.5, 0.2, Bargmann::quarter, 1, 0.9), Error);
  CHECK_THROWS_AS(eval_f_at_collapse(0.5, 0.0, Bargmann::quarter, 1), Error);
}
