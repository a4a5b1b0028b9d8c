#include "core/fock_ed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace atpqrm {

namespace {

// Spin of chain site s: up on even sites of the even chain and on odd sites
// of the odd chain.
bool site_is_up(Parity s, std::size_t site) { return (site % 2 == 0) == (s == Parity::even); }

linalg::SymmetricTridiagonal make_chain(const ModelParams& p, std::size_t dim, Parity s) {
  const double k0 = lowest_photon_number(p.q);
  std::vector<double> diag(dim), off(dim - 1);
  for (std::size_t j = 0; j < dim; ++j) {
    const double k = k0 + 2.0 * static_cast<double>(j);
    diag[j] = k + (site_is_up(s, j) ? 0.5 : -0.5) * p.delta;
    if (j + 1 < dim) {
      // up -> down goes through the rotating term g, down -> up through r g.
      const double amp = std::sqrt((k + 1.0) * (k + 2.0));
      off[j] = (site_is_up(s, j) ? p.g : p.r * p.g) * amp;
    }
  }
  return {std::move(diag), std::move(off)};
}

}  // namespace

FockHamiltonian::FockHamiltonian(const ModelParams& p, std::size_t dim) : params_(p), dim_(dim) {
  validate(p);
  require(dim >= 4, "ED dimension must be >= 4");
  even_ = make_chain(p, dim, Parity::even);
  odd_ = make_chain(p, dim, Parity::odd);
}

std::size_t FockHamiltonian::full_index(Parity s, std::size_t site) const {
  return 2 * site + (site_is_up(s, site) ? 0 : 1);
}

linalg::BandedSymmetric FockHamiltonian::full_matrix() const {
  linalg::BandedSymmetric m(size(), 3);
  for (Parity s : {Parity::even, Parity::odd}) {
    const auto& c = chain(s);
    for (std::size_t j = 0; j < dim_; ++j) {
      m.set(full_index(s, j), full_index(s, j), c.diag()[j]);
      if (j + 1 < dim_) m.set(full_index(s, j), full_index(s, j + 1), c.off()[j]);
    }
  }
  return m;
}

std::vector<double> FockHamiltonian::parity_diagonal() const {
  std::vector<double> d(size());
  for (std::size_t j = 0; j < dim_; ++j) {
    const double phase = (j % 2 == 0) ? 1.0 : -1.0;
    d[2 * j] = phase;
    d[2 * j + 1] = -phase;
  }
  return d;
}

FockHamiltonian build_hamiltonian(const ModelParams& p, std::size_t dim) { return {p, dim}; }

std::vector<double> chain_eigenvalues(const FockHamiltonian& h, Parity s, std::size_t k) {
  return h.chain(s).lowest_eigenvalues(std::min(k, h.dim()));
}

double ed_reliability_coupling(double r, std::size_t dim) {
  const double gc = collapse_coupling(r);
  if (r == 0.0) return gc;
  const double target = std::exp(std::log(1e-16) / static_cast<double>(dim));
  auto tanh_theta = [r](double g) {
    const double bp = std::sqrt((1.0 - g * (1.0 + r)) * (1.0 + g * (1.0 + r)));
    const double bm = std::sqrt(1.0 - g * g * (r - 1.0) * (r - 1.0));
    return 2.0 * g * std::sqrt(r) / (bp + bm);
  };
  double lo = 0.0, hi = gc;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * gc; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tanh_theta(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

EDResult diagonalize(const FockHamiltonian& h, std::size_t k_lowest, bool vectors) {
  require(k_lowest <= h.size(), "k_lowest exceeds the basis size");
  struct Item {
    double e;
    Parity s;
    std::size_t idx;
  };
  std::vector<Item> items;
  std::vector<double> ev[2];
  for (Parity s : {Parity::even, Parity::odd}) {
    auto& v = ev[s == Parity::even ? 0 : 1];
    v = chain_eigenvalues(h, s, k_lowest);
    for (std::size_t i = 0; i < v.size(); ++i) items.push_back({v[i], s, i});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.e < b.e; });
  items.resize(k_lowest);

  EDResult res;
  res.dim = h.dim();
  res.truncation_shift = std::numeric_limits<double>::quiet_NaN();
  res.reliable_below_g = ed_reliability_coupling(h.params().r, h.dim());
  for (const Item& it : items) {
    res.eigenvalues.push_back(it.e);
    res.parity.push_back(it.s);
  }
  if (!vectors) return res;

  // Chain eigenvectors, orthogonalized within clusters of (near) equal
  // eigenvalues, then scattered into the interleaved basis.
  std::vector<std::vector<double>> chain_vecs[2];
  for (int c = 0; c < 2; ++c) {
    const Parity s = c == 0 ? Parity::even : Parity::odd;
    std::size_t needed = 0;
    for (const Item& it : items)
      if (it.s == s) needed = std::max(needed, it.idx + 1);
    const auto& T = h.chain(s);
    const double cluster_tol = 1e-9 * std::max(1.0, T.norm_inf());
    auto& vecs = chain_vecs[c];
    std::size_t cluster_start = 0;
    for (std::size_t i = 0; i < needed; ++i) {
      if (i > 0 && ev[c][i] - ev[c][i - 1] > cluster_tol) cluster_start = i;
      std::span<const std::vector<double>> prev(vecs.data() + cluster_start, i - cluster_start);
      vecs.push_back(T.eigenvector(ev[c][i], prev));
    }
  }
  for (const Item& it : items) {
    const auto& cv = chain_vecs[it.s == Parity::even ? 0 : 1][it.idx];
    std::vector<double> full(h.size(), 0.0);
    for (std::size_t j = 0; j < cv.size(); ++j) full[h.full_index(it.s, j)] = cv[j];
    res.eigenvectors.push_back(std::move(full));
  }
  return res;
}

EDResult diagonalize_converged(const ModelParams& p, std::size_t k_lowest, std::size_t dim0, double tol,
                               std::size_t max_dim) {
  require(tol > 0.0, "tolerance must be positive");
  std::size_t dim = std::max<std::size_t>(dim0, 4);
  EDResult prev = diagonalize(build_hamiltonian(p, dim), k_lowest);
  for (;;) {
    const std::size_t next_dim = 2 * dim;
    EDResult cur = diagonalize(build_hamiltonian(p, next_dim), k_lowest);
    double shift = 0.0;
    for (std::size_t i = 0; i < k_lowest; ++i)
      shift = std::max(shift, std::abs(cur.eigenvalues[i] - prev.eigenvalues[i]));
    cur.truncation_shift = shift;
    dim = next_dim;
    if (shift < tol || 2 * dim > max_dim) return cur;
    prev = std::move(cur);
  }
}

std::vector<double> RwaSpectrum::all_sorted() const {
  std::vector<double> out(lower);
  out.insert(out.end(), upper.begin(), upper.end());
  out.push_back(lone);
  std::sort(out.begin(), out.end());
  return out;
}

RwaSpectrum rwa_spectrum(double delta, double g, long n_max, Bargmann q) {
  require(n_max >= 0, "n_max must be >= 0");
  require(std::isfinite(delta) && std::isfinite(g), "parameters must be finite");
  const double k0 = lowest_photon_number(q);
  RwaSpectrum s;
  s.lone = k0 - delta / 2.0;
  const double detune = 1.0 - delta / 2.0;
  for (long n = 0; n <= n_max; ++n) {
    const double k = k0 + 2.0 * static_cast<double>(n);
    const double root = std::sqrt(detune * detune + g * g * (k + 1.0) * (k + 2.0));
    s.lower.push_back(k + 1.0 - root);
    s.upper.push_back(k + 1.0 + root);
  }
  return s;
}

PositivityReport check_positivity(double r, std::size_t dim, double threshold) {
  require(r >= 0.0 && r <= 1.0, "positivity check needs 0 <= r <= 1");
  require(dim >= 4, "dimension must be >= 4");
  const double c = (1.0 - r) / (1.0 + r);
  // Index 2n: first component, 2n+1: second component, Fock state n.
  linalg::BandedSymmetric m(2 * dim, 5);
  for (std::size_t n = 0; n < dim; ++n) {
    const double nd = static_cast<double>(n);
    m.set(2 * n, 2 * n, nd + 0.5);          // x^2
    m.set(2 * n + 1, 2 * n + 1, nd + 0.5);  // p^2
    m.set(2 * n, 2 * n + 1, -0.5 * c);      // c (a^2 - a+^2 - 1)/2, diagonal part
    if (n + 2 < dim) {
      const double s = std::sqrt((nd + 1.0) * (nd + 2.0));
      m.set(2 * (n + 2), 2 * n, 0.5 * s);
      m.set(2 * (n + 2) + 1, 2 * n + 1, -0.5 * s);
      // <n|B|n+2> = +s/2, <n+2|B|n> = -s/2; B sits in the (first, second) block.
      m.set(2 * n, 2 * (n + 2) + 1, 0.5 * c * s);
      m.set(2 * (n + 2), 2 * n + 1, -0.5 * c * s);
    }
  }
  PositivityReport rep;
  rep.threshold = threshold;
  rep.min_eigenvalue = m.eigenvalue(0);
  rep.negatives_below_threshold = m.count_below(-threshold);
  return rep;
}

Parity parity_expectation(const std::vector<double>& v) {
  // Interleaved basis: sign = spin * (-1)^j.
  double pi = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t j = i / 2;
    const double spin = (i % 2 == 0) ? 1.0 : -1.0;
    const double phase = (j % 2 == 0) ? 1.0 : -1.0;
    pi += spin * phase * v[i] * v[i];
    norm += v[i] * v[i];
  }
  require(norm > 0.0, "zero vector");
  pi /= norm;
  if (std::abs(pi) <= 0.99)
    throw Error(ErrorCode::ambiguous_parity, "parity expectation " + std::to_string(pi) + " is ambiguous");
  return pi > 0 ? Parity::even : Parity::odd;
}

}  // namespace atpqrm
