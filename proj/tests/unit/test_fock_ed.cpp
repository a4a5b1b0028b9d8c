#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "core/fock_ed.hpp"

using namespace atpqrm;

namespace {

ModelParams params(double delta, double r, double g, Bargmann q = Bargmann::quarter) {
  ModelParams p;
  p.delta = delta;
  p.r = r;
  p.g = g;
  p.q = q;
  return p;
}

// Full Fock space (both Bargmann subspaces) built from explicit a and a+
// matrices; spin order (up, down).
Eigen::VectorXd full_space_levels(double delta, double r, double g, int M) {
  const int n = M + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd num = ad * a;
  const Eigen::MatrixXd a2 = a * a, ad2 = ad * ad;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  // sigma+ = |up><down|: block (up, down).
  H.topLeftCorner(n, n) = num + 0.5 * delta * Eigen::MatrixXd::Identity(n, n);
  H.bottomRightCorner(n, n) = num - 0.5 * delta * Eigen::MatrixXd::Identity(n, n);
  H.topRightCorner(n, n) = g * a2 + r * g * ad2;     // sigma+ a^2 + r (a+)^2 sigma+
  H.bottomLeftCorner(n, n) = g * ad2 + r * g * a2;   // (a+)^2 sigma- + r sigma- a^2
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("uncoupled spectrum") {
  for (Bargmann q : {Bargmann::quarter, Bargmann::three_quarters}) {
    const auto h = build_hamiltonian(params(0.6, 0.3, 0.0, q), 50);
    const auto res = diagonalize(h, 8);
    std::vector<double> want;
    const int k0 = lowest_photon_number(q);
    for (int j = 0; j < 10; ++j) {
      want.push_back(k0 + 2 * j + 0.3);
      want.push_back(k0 + 2 * j - 0.3);
    }
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(res.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-14));
  }
}

TEST_CASE("union of the two subspaces matches a dense full-space solve") {
  const double delta = 0.7, r = 0.5, g = 0.3;
  const auto full = full_space_levels(delta, r, g, 400);
  const auto a = diagonalize(build_hamiltonian(params(delta, r, g, Bargmann::quarter), 300), 12);
  const auto b = diagonalize(build_hamiltonian(params(delta, r, g, Bargmann::three_quarters), 300), 12);
  std::vector<double> merged = a.eigenvalues;
  merged.insert(merged.end(), b.eigenvalues.begin(), b.eigenvalues.end());
  std::sort(merged.begin(), merged.end());
  for (int i = 0; i < 12; ++i) CHECK(merged[i] == doctest::Approx(full(i)).epsilon(1e-10));
}

TEST_CASE("Hamiltonian commutes with the parity operator") {
  const auto h = build_hamiltonian(params(0.5, 0.4, 0.5, Bargmann::three_quarters), 30);
  const auto m = h.full_matrix();
  const auto pi = h.parity_diagonal();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (pi[i] != pi[j]) CHECK(m.get(i, j) == 0.0);
  // Chains reproduce the interleaved matrix.
  for (Parity s : {Parity::even, Parity::odd}) {
    const auto& c = h.chain(s);
    for (std::size_t k = 0; k < c.size(); ++k) {
      CHECK(c.diag()[k] == m.get(h.full_index(s, k), h.full_index(s, k)));
      CHECK(pi[h.full_index(s, k)] == static_cast<double>(sign(s)));
      if (k + 1 < c.size()) CHECK(c.off()[k] == m.get(h.full_index(s, k), h.full_index(s, k + 1)));
    }
  }
}

TEST_CASE("eigenvectors carry the parity of their chain") {
  const auto h = build_hamiltonian(params(0.5, 0.2, 0.6), 400);
  const auto res = diagonalize(h, 6, true);
  REQUIRE(res.eigenvectors.size() == 6);
  const auto m = h.full_matrix();
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& v = res.eigenvectors[i];
    CHECK(parity_expectation(v) == res.parity[i]);
    auto Hv = m.apply(v);
    double rq = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) rq += v[j] * Hv[j];
    CHECK(rq == doctest::Approx(res.eigenvalues[i]).epsilon(1e-11));
  }
}

TEST_CASE("mixed-parity vector is rejected") {
  std::vector<double> v(8, 0.0);
  v[0] = v[1] = std::sqrt(0.5);  // |up,k0> (+1) and |down,k0> (-1)
  try {
    parity_expectation(v);
    FAIL("expected ambiguous_parity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ambiguous_parity);
  }
  v[1] = 0.05;
  v[0] = std::sqrt(1 - 0.0025);
  CHECK(parity_expectation(v) == Parity::even);
}

TEST_CASE("eigenvalues decrease monotonically with the basis size") {
  const auto p = params(0.5, 0.25, 0.7);
  std::vector<double> last(4, 1e300);
  for (std::size_t dim : {50u, 100u, 200u, 400u, 800u}) {
    const auto res = diagonalize(build_hamiltonian(p, dim), 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(res.eigenvalues[i] <= last[i] + 1e-12);
      last[i] = res.eigenvalues[i];
    }
  }
}

TEST_CASE("converged diagonalization") {
  const auto res = diagonalize_converged(params(0.5, 0.2, 0.2), 9, 200, 1e-10);
  CHECK(res.truncation_shift < 1e-10);
  // Reference levels from the G-function zeros of the same point.
  const double want[] = {-0.25134388709114, 0.19827751582002, 1.79293022698475};
  for (int i = 0; i < 3; ++i) CHECK(res.eigenvalues[i] == doctest::Approx(want[i]).epsilon(1e-12));
  CHECK(res.reliable_below_g > 0.2);
}

TEST_CASE("reliability coupling") {
  CHECK(ed_reliability_coupling(0.0, 100) == 1.0);
  for (double r : {0.1, 0.5, 1.0}) {
    const double g = ed_reliability_coupling(r, 1000);
    const double bp = std::sqrt(1 - g * g * (1 + r) * (1 + r)), bm = std::sqrt(1 - g * g * (1 - r) * (1 - r));
    const double t = 2 * g * std::sqrt(r) / (bp + bm);
    CHECK(std::pow(t, 1000.0) == doctest::Approx(1e-16).epsilon(1e-6));
    CHECK(g < collapse_coupling(r));
    CHECK(ed_reliability_coupling(r, 4000) > g);
  }
}

TEST_CASE("rotating-wave limit at g = 1") {
  // Delta = 1: every pair splits into -1/2 and 2k + 5/2.
  const auto p = params(1.0, 0.0, 1.0);
  const auto h = build_hamiltonian(p, 400);
  std::size_t degenerate = 0;
  for (Parity s : {Parity::even, Parity::odd}) degenerate += h.chain(s).count_below(-0.5 + 1e-6);
  const auto rwa = rwa_spectrum(1.0, 1.0, 398);
  std::size_t closed_form = 1;  // the lone |down, 0>
  for (double e : rwa.lower) closed_form += std::abs(e + 0.5) < 1e-9;
  CHECK(degenerate == closed_form);
  CHECK(degenerate >= 390);
  const auto res = diagonalize(h, degenerate + 6);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(res.eigenvalues[degenerate + j] == doctest::Approx(4.0 * j + 2.5).epsilon(1e-10));
  CHECK(rwa.lone == -0.5);
}

TEST_CASE("rotating-wave limit below g = 1") {
  for (Bargmann q : {Bargmann::quarter, Bargmann::three_quarters}) {
    const auto p = params(0.8, 0.0, 0.6, q);
    const auto res = diagonalize(build_hamiltonian(p, 300), 20);
    const auto all = rwa_spectrum(0.8, 0.6, 298, q).all_sorted();
    for (std::size_t i = 0; i < 20; ++i) CHECK(res.eigenvalues[i] == doctest::Approx(all[i]).epsilon(1e-8));
  }
}

TEST_CASE("collapse-point operator is positive") {
  for (double r : {0.25, 0.5, 1.0}) {
    const auto rep = check_positivity(r, 400);
    CHECK(rep.negatives_below_threshold == 0);
    CHECK(rep.min_eigenvalue > 0.0);
  }
  // Dense cross-check at small size: same truncated matrix built from
  // x = (a + a+)/sqrt2 and p = i(a+ - a)/sqrt2 with i x p = (a^2 - a+^2 - 1)/2.
  const int n = 40;
  const double r = 0.3, c = (1 - r) / (1 + r);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 2, n + 2);
  for (int k = 1; k < n + 2; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd x2 = (0.5 * (a + ad) * (a + ad)).topLeftCorner(n, n);
  const Eigen::MatrixXd p2 = (-0.5 * (ad - a) * (ad - a)).topLeftCorner(n, n);
  const Eigen::MatrixXd B = (0.5 * c * (a * a - ad * ad - Eigen::MatrixXd::Identity(n + 2, n + 2))).topLeftCorner(n, n);
  Eigen::MatrixXd H(2 * n, 2 * n);
  H << x2, B, B.transpose(), p2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  CHECK(check_positivity(r, n).min_eigenvalue == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(check_positivity(1.5, 100), Error);
  CHECK_THROWS_AS(check_positivity(0.5, 2), Error);
  CHECK_THROWS_AS(diagonalize(build_hamiltonian(params(0.5, 0.2, 0.2), 5), 11), Error);
}
