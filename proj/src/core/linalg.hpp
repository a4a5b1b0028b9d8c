#pragma once

// Small symmetric eigen-toolkit used by the Fock-space oracle and the
// collapse-point solver. Eigenvalues come from Sturm-count bisection, which is
// reliable for the k lowest values of very large sparse problems; eigenvectors
// from inverse iteration.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace atpqrm::linalg {

class SymmetricTridiagonal {
 public:
  SymmetricTridiagonal() = default;
  // diag has size n, off has size n-1 (off[i] couples i and i+1).
  SymmetricTridiagonal(std::vector<double> diag, std::vector<double> off);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& off() const { return off_; }

  // Number of eigenvalues strictly below x.
  std::size_t count_below(double x) const;

  // Gershgorin enclosure of the spectrum.
  std::pair<double, double> bounds() const;

  // k-th smallest eigenvalue (0-based), bisected to full relative precision
  // or to abs_tol, whichever is looser.
  double eigenvalue(std::size_t k, double abs_tol = 0.0) const;
  std::vector<double> lowest_eigenvalues(std::size_t k, double abs_tol = 0.0) const;

  // Unit eigenvector for an accurate eigenvalue, orthogonalized against
  // `previous` (vectors of a nearby cluster). Throws Error
  // eigensolver_no_convergence if the residual test fails.
  std::vector<double> eigenvector(double lambda,
                                  std::span<const std::vector<double>> previous = {}) const;

  std::vector<double> apply(std::span<const double> x) const;
  double norm_inf() const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
  double pivmin_ = 0.0;
};

// Symmetric band matrix, lower storage: band_[d][i] = A(i+d, i).
class BandedSymmetric {
 public:
  BandedSymmetric(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return b_; }

  double get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);
  void add(std::size_t i, std::size_t j, double v);

  std::vector<double> apply(std::span<const double> x) const;
  std::pair<double, double> bounds() const;
  double norm_inf() const;

  // Inertia count: number of negative pivots of LDL^T(A - x I).
  std::size_t count_below(double x) const;

  // k-th smallest eigenvalue via bisection on count_below.
  double eigenvalue(std::size_t k) const;

 private:
  std::size_t n_;
  std::size_t b_;
  std::vector<std::vector<double>> band_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace atpqrm::linalg
