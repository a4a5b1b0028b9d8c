#pragma once

// Exact diagonalization in a truncated Fock basis.
//
// Within a Bargmann subspace the photon number k runs over k0, k0+2, ...
// (k0 = 0 for q=1/4, 1 for q=3/4). The couplings (a+)^2 sigma- and
// (a+)^2 sigma+ only connect |up,k> <-> |down,k+2> and |down,k> <-> |up,k+2>,
// so the subspace splits exactly into two tridiagonal chains:
//   even: |up,k0>, |down,k0+2>, |up,k0+4>, ...   (Pi = +1)
//   odd:  |down,k0>, |up,k0+2>, |down,k0+4>, ... (Pi = -1)
// Pi = sigma_z exp(i pi a+a/2), with the constant phase i dropped for q=3/4.

#include <cstddef>
#include <optional>
#include <vector>

#include "core/linalg.hpp"
#include "core/model.hpp"

namespace atpqrm {

class FockHamiltonian {
 public:
  // dim Fock states per spin component (k = k0, k0+2, ..., k0+2(dim-1)).
  FockHamiltonian(const ModelParams& p, std::size_t dim);

  const ModelParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return 2 * dim_; }

  // Interleaved full matrix: index 2j is |up,k0+2j>, 2j+1 is |down,k0+2j>.
  linalg::BandedSymmetric full_matrix() const;
  // Diagonal of Pi in the interleaved basis.
  std::vector<double> parity_diagonal() const;

  const linalg::SymmetricTridiagonal& chain(Parity s) const {
    return s == Parity::even ? even_ : odd_;
  }
  // Position of chain site `site` in the interleaved basis.
  std::size_t full_index(Parity s, std::size_t site) const;

 private:
  ModelParams params_;
  std::size_t dim_;
  linalg::SymmetricTridiagonal even_;
  linalg::SymmetricTridiagonal odd_;
};

FockHamiltonian build_hamiltonian(const ModelParams& p, std::size_t dim);

struct EDResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<Parity> parity;
  // Unit vectors in the interleaved basis; empty unless requested.
  std::vector<std::vector<double>> eigenvectors;
  std::size_t dim = 0;
  // Largest shift of the watched eigenvalues under the last dimension
  // doubling; NaN when no doubling was done.
  double truncation_shift = 0.0;
  // Coupling below which the squeezed ground-state amplitudes fit into the
  // truncated basis (tanh(theta)^dim < 1e-16). Output at larger g is
  // advisory. Equals g_c for r = 0.
  double reliable_below_g = 0.0;
};

// k lowest eigenpairs over both parity chains.
EDResult diagonalize(const FockHamiltonian& h, std::size_t k_lowest, bool vectors = false);

// Lowest k eigenvalues of a single chain.
std::vector<double> chain_eigenvalues(const FockHamiltonian& h, Parity s, std::size_t k);

// Doubles dim from dim0 until the k lowest eigenvalues move by less than tol.
EDResult diagonalize_converged(const ModelParams& p, std::size_t k_lowest, std::size_t dim0 = 2000,
                               double tol = 1e-8, std::size_t max_dim = 64000);

double ed_reliability_coupling(double r, std::size_t dim);

// Closed-form spectrum at r = 0. Pairs |up,k>, |down,k+2> with k = k0+2n give
//   E = k+1 +/- sqrt((1-delta/2)^2 + g^2 (k+1)(k+2)),
// and |down,k0> is left alone at k0 - delta/2.
struct RwaSpectrum {
  std::vector<double> lower;  // minus branch, n = 0..n_max
  std::vector<double> upper;  // plus branch
  double lone = 0.0;
  std::vector<double> all_sorted() const;
};

RwaSpectrum rwa_spectrum(double delta, double g, long n_max, Bargmann q = Bargmann::quarter);

// Smallest eigenvalue of the Fock truncation of
//   H0 = [[x^2, c i x p], [-c i p x, p^2]],  c = (1-r)/(1+r),
// the collapse-point Hamiltonian at delta = Delta_c^(1/4) shifted by +1/2.
// Uses Fock states 0..dim-1 for each component.
struct PositivityReport {
  double min_eigenvalue = 0.0;
  std::size_t negatives_below_threshold = 0;  // eigenvalues below -threshold
  double threshold = 1e-10;
};

PositivityReport check_positivity(double r, std::size_t dim, double threshold = 1e-10);

// <v|Pi|v> for a unit vector in the interleaved basis; returns the rounded
// sign or throws Error(ambiguous_parity) when |<Pi>| <= 0.99.
Parity parity_expectation(const std::vector<double>& v);

}  // namespace atpqrm
