#include "core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace atpqrm::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

template <typename Counter>
double bisect(const Counter& count_below, std::size_t k, double lo, double hi, double pivmin,
              double abs_tol = 0.0) {
  // Invariant: count_below(lo) <= k < count_below(hi).
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (width <= std::max(2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * pivmin, abs_tol) ||
        mid == lo || mid == hi)
      break;
    if (count_below(mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SymmetricTridiagonal::SymmetricTridiagonal(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off)) {
  require(!diag_.empty(), "empty tridiagonal matrix");
  require(off_.size() + 1 == diag_.size(), "off-diagonal must have size n-1");
  double emax = 1.0;
  for (double e : off_) emax = std::max(emax, e * e);
  pivmin_ = std::numeric_limits<double>::min() * emax;
}

std::size_t SymmetricTridiagonal::count_below(double x) const {
  std::size_t count = 0;
  double d = diag_[0] - x;
  if (std::abs(d) < pivmin_) d = -pivmin_;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < diag_.size(); ++i) {
    d = (diag_[i] - x) - off_[i - 1] * off_[i - 1] / d;
    if (std::abs(d) < pivmin_) d = -pivmin_;
    if (d < 0.0) ++count;
  }
  return count;
}

std::pair<double, double> SymmetricTridiagonal::bounds() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double rad = 0.0;
    if (i > 0) rad += std::abs(off_[i - 1]);
    if (i + 1 < n) rad += std::abs(off_[i]);
    lo = std::min(lo, diag_[i] - rad);
    hi = std::max(hi, diag_[i] + rad);
  }
  const double pad = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * pivmin_ + 1e-300;
  return {lo - pad, hi + pad};
}

double SymmetricTridiagonal::norm_inf() const {
  double m = 0.0;
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(off_[i - 1]);
    if (i + 1 < n) row += std::abs(off_[i]);
    m = std::max(m, row);
  }
  return m;
}

double SymmetricTridiagonal::eigenvalue(std::size_t k, double abs_tol) const {
  require(k < size(), "eigenvalue index out of range");
  const auto [lo, hi] = bounds();
  return bisect([this](double x) { return count_below(x); }, k, lo, hi, pivmin_, abs_tol);
}

std::vector<double> SymmetricTridiagonal::lowest_eigenvalues(std::size_t k, double abs_tol) const {
  require(k <= size(), "requested more eigenvalues than the dimension");
  std::vector<double> out;
  out.reserve(k);
  auto [lo, hi] = bounds();
  for (std::size_t i = 0; i < k; ++i) {
    // Previous eigenvalue (minus padding) is a valid lower bracket.
    double start = lo;
    if (!out.empty()) {
      start = out.back() - 4.0 * kEps * std::abs(out.back()) - 4.0 * pivmin_;
      if (count_below(start) > i) start = lo;
    }
    out.push_back(bisect([this](double x) { return count_below(x); }, i, start, hi, pivmin_, abs_tol));
  }
  return out;
}

std::vector<double> SymmetricTridiagonal::apply(std::span<const double> x) const {
  const std::size_t n = diag_.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += off_[i - 1] * x[i - 1];
    if (i + 1 < n) s += off_[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

std::vector<double> SymmetricTridiagonal::eigenvector(double lambda,
                                                      std::span<const std::vector<double>> previous) const {
  const std::size_t n = diag_.size();
  if (n == 1) return {1.0};
  const double anorm = std::max(norm_inf(), std::numeric_limits<double>::min());
  const double tiny = kEps * anorm;

  // LU of (T - lambda I) with partial pivoting (dgttrf layout).
  std::vector<double> d(n), dl(off_), du(off_), du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<unsigned char> swapped(n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = diag_[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;

  auto solve = [&](std::vector<double>& b) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (swapped[i]) {
        const double temp = b[i] - dl[i] * b[i + 1];
        b[i] = b[i + 1];
        b[i + 1] = temp;
      } else {
        b[i + 1] -= dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t ii = n - 2; ii-- > 0;) b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
  };

  auto orthonormalize = [&](std::vector<double>& v) {
    for (const auto& p : previous) {
      const double c = dot(v, p);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * p[i];
    }
    const double nv = norm2(v);
    if (!(nv > 0.0) || !std::isfinite(nv)) return false;
    for (double& x : v) x /= nv;
    return true;
  };

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);  // deterministic start
  orthonormalize(v);

  for (int it = 0; it < 8; ++it) {
    solve(v);
    if (!orthonormalize(v)) break;
    if (it >= 1) {
      const std::vector<double> tv = apply(v);
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) res += (tv[i] - lambda * v[i]) * (tv[i] - lambda * v[i]);
      if (std::sqrt(res) <= 1e-10 * anorm) return v;
    }
  }
  throw Error(ErrorCode::eigensolver_no_convergence,
              "inverse iteration did not converge for eigenvalue " + std::to_string(lambda));
}

BandedSymmetric::BandedSymmetric(std::size_t n, std::size_t bandwidth)
    : n_(n), b_(bandwidth), band_(bandwidth + 1) {
  require(n > 0, "empty band matrix");
  for (std::size_t d = 0; d <= b_; ++d) band_[d].assign(n_ > d ? n_ - d : 0, 0.0);
}

double BandedSymmetric::get(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  if (d > b_) return 0.0;
  return band_[d][j];
}

void BandedSymmetric::set(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  require(d <= b_ && i < n_, "band matrix entry outside the band");
  band_[d][j] = v;
}

void BandedSymmetric::add(std::size_t i, std::size_t j, double v) { set(i, j, get(i, j) + v); }

std::vector<double> BandedSymmetric::apply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) y[j] += band_[0][j] * x[j];
  for (std::size_t d = 1; d <= b_; ++d)
    for (std::size_t j = 0; j + d < n_; ++j) {
      const double a = band_[d][j];
      y[j + d] += a * x[j];
      y[j] += a * x[j + d];
    }
  return y;
}

std::pair<double, double> BandedSymmetric::bounds() const {
  std::vector<double> rad(n_, 0.0);
  for (std::size_t d = 1; d <= b_; ++d)
    for (std::size_t j = 0; j + d < n_; ++j) {
      rad[j] += std::abs(band_[d][j]);
      rad[j + d] += std::abs(band_[d][j]);
    }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n_; ++i) {
    lo = std::min(lo, band_[0][i] - rad[i]);
    hi = std::max(hi, band_[0][i] + rad[i]);
  }
  const double pad = 4.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  return {lo - pad, hi + pad};
}

double BandedSymmetric::norm_inf() const {
  const auto [lo, hi] = bounds();
  return std::max(std::abs(lo), std::abs(hi));
}

std::size_t BandedSymmetric::count_below(double x) const {
  // LDL^T without pivoting; Sylvester's law of inertia gives the count.
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, norm_inf() * norm_inf());
  std::vector<double> D(n_);
  // L[d][j] = L(j+d, j)
  std::vector<std::vector<double>> L(b_ + 1);
  for (std::size_t d = 1; d <= b_; ++d) L[d].assign(n_ > d ? n_ - d : 0, 0.0);
  std::size_t count = 0;
  for (std::size_t j = 0; j < n_; ++j) {
    double dj = band_[0][j] - x;
    const std::size_t k0 = j > b_ ? j - b_ : 0;
    for (std::size_t k = k0; k < j; ++k) {
      const double l = L[j - k][k];
      dj -= l * l * D[k];
    }
    if (std::abs(dj) < pivmin) dj = -pivmin;
    D[j] = dj;
    if (dj < 0.0) ++count;
    for (std::size_t i = j + 1; i <= std::min(n_ - 1, j + b_); ++i) {
      double s = band_[i - j][j];
      const std::size_t kk0 = i > b_ ? i - b_ : 0;
      for (std::size_t k = kk0; k < j; ++k) s -= L[i - k][k] * L[j - k][k] * D[k];
      L[i - j][j] = s / dj;
    }
  }
  return count;
}

double BandedSymmetric::eigenvalue(std::size_t k) const {
  require(k < n_, "eigenvalue index out of range");
  const auto [lo, hi] = bounds();
  return bisect([this](double x) { return count_below(x); }, k, lo, hi, 0.0);
}

}  // namespace atpqrm::linalg
