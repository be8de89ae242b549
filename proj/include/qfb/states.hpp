#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qfb/matrix.hpp"

// Density matrices, classical-quantum states and the entropy functionals.
// All entropies are in bits (log base 2).

namespace qfb {

inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigNegTol = 1e-10;
inline constexpr double kProbSumTol = 1e-10;

// -log2 contribution of one eigenvalue, with the 0*log(0) := 0 convention.
// Eigenvalues in [-1e-10, 0) are clipped to 0; anything more negative is a
// PSD violation and throws.
inline double entropy_from_eigenvalues(const std::vector<double>& vals) {
  double h = 0.0;
  for (double v : vals) {
    if (v < -kEigNegTol)
      throw std::invalid_argument("entropy: eigenvalue below -1e-10, matrix is not PSD");
    if (v <= 0.0) continue;
    if (v > 1.0) v = 1.0;
    h -= v * std::log2(v);
  }
  return h;
}

// Entropy of a raw Hermitian matrix expected to satisfy density-matrix
// invariants within tolerance. Hot-path variant that skips re-validation.
inline double entropy_psd(const ComplexMatrix& m) {
  return entropy_from_eigenvalues(eigvals_hermitian(m));
}

class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, std::vector<std::size_t> dims)
      : mat_(std::move(mat)), dims_(std::move(dims)) {
    validate();
  }

  explicit DensityMatrix(ComplexMatrix mat)
      : DensityMatrix(std::move(mat), {0}) {
    // delegate fixed dims below; placeholder replaced in validate-friendly way
  }

  // Pure state |psi><psi| from an amplitude vector (normalized internally).
  static DensityMatrix pure(const std::vector<complex>& amplitudes,
                            std::vector<std::size_t> dims = {}) {
    const std::size_t d = amplitudes.size();
    if (d == 0) throw std::invalid_argument("DensityMatrix::pure: empty amplitude vector");
    double nrm = 0.0;
    for (const auto& a : amplitudes) nrm += std::norm(a);
    if (nrm <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    nrm = std::sqrt(nrm);
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(r, c) = (amplitudes[r] / nrm) * std::conj(amplitudes[c] / nrm);
    if (dims.empty()) dims = {d};
    return DensityMatrix(std::move(m), std::move(dims));
  }

  static DensityMatrix basis_state(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::invalid_argument("basis_state: index out of range");
    std::vector<complex> amp(dim, 0.0);
    amp[index] = 1.0;
    return pure(amp);
  }

  static DensityMatrix maximally_mixed(std::size_t dim) {
    ComplexMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
    return DensityMatrix(std::move(m), {dim});
  }

  const ComplexMatrix& mat() const { return mat_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const { return mat_.rows(); }
  std::size_t num_subsystems() const { return dims_.size(); }

  // Partial trace onto the kept subsystems, as a density matrix.
  DensityMatrix marginal(const std::vector<std::size_t>& keep) const {
    std::vector<std::size_t> kept_dims;
    for (std::size_t s : keep) {
      if (s >= dims_.size()) throw std::invalid_argument("marginal: subsystem index out of range");
      kept_dims.push_back(dims_[s]);
    }
    return DensityMatrix(partial_trace(mat_, dims_, keep), std::move(kept_dims));
  }

  // Same matrix, reinterpreted with a different subsystem split.
  DensityMatrix with_dims(std::vector<std::size_t> dims) const {
    return DensityMatrix(mat_, std::move(dims));
  }

 private:
  void validate() const {
    if (!mat_.square()) throw std::invalid_argument("DensityMatrix: matrix is not square");
    if (!mat_.is_finite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
    if (dims_.empty() || detail::dims_product(dims_) != mat_.rows())
      throw std::invalid_argument("DensityMatrix: product of dims does not match matrix size");
    if (mat_.hermiticity_defect() > kHermTol)
      throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
    const complex tr = mat_.trace();
    if (std::abs(tr - complex(1.0, 0.0)) > kTraceTol)
      throw std::invalid_argument("DensityMatrix: trace differs from 1 by more than 1e-10");
    const auto vals = eigvals_hermitian(mat_);
    if (!vals.empty() && vals.front() < -kEigNegTol)
      throw std::invalid_argument("DensityMatrix: minimum eigenvalue below -1e-10");
  }

  ComplexMatrix mat_;
  std::vector<std::size_t> dims_;
};

inline double entropy(const DensityMatrix& rho) { return entropy_psd(rho.mat()); }

// Relative entropy D(rho || sigma) in bits; +inf sentinel when the support of
// rho is not contained in the support of sigma (sigma eigenvalues < 1e-12
// count as zero support).
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("relative_entropy: dimension mismatch");
  constexpr double kSupportEig = 1e-12;
  constexpr double kSupportMass = 1e-10;

  const HermitianEigen er = eig_hermitian(rho.mat());
  const HermitianEigen es = eig_hermitian(sigma.mat());
  const ComplexMatrix overlaps = er.eigenvectors.adjoint() * es.eigenvectors;
  const std::size_t n = rho.dim();

  double kernel_mass = 0.0;
  double cross = 0.0;  // sum_ij r_i |<u_i|v_j>|^2 log2 s_j over the support of sigma
  for (std::size_t j = 0; j < n; ++j) {
    const double s = es.eigenvalues[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::max(0.0, er.eigenvalues[i]);
      if (r <= 0.0) continue;
      const double w = r * std::norm(overlaps(i, j));
      if (s < kSupportEig)
        kernel_mass += w;
      else
        cross += w * std::log2(std::min(s, 1.0));
    }
  }
  if (kernel_mass > kSupportMass) return std::numeric_limits<double>::infinity();

  double self = 0.0;  // sum_i r_i log2 r_i
  for (double r : er.eigenvalues) {
    if (r <= 0.0) continue;
    const double rc = std::min(r, 1.0);
    self += rc * std::log2(rc);
  }
  return self - cross;
}

namespace detail {

inline void check_subset(const std::vector<std::size_t>& subset, std::size_t n_subsystems,
                         const char* who) {
  if (subset.empty()) throw std::invalid_argument(std::string(who) + ": empty subsystem set");
  if (!std::is_sorted(subset.begin(), subset.end()) ||
      std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument(std::string(who) + ": subsystem indices must be sorted and distinct");
  if (subset.back() >= n_subsystems)
    throw std::invalid_argument(std::string(who) + ": subsystem index out of range");
}

inline std::vector<std::size_t> complement_of(const std::vector<std::size_t>& subset,
                                              std::size_t n_subsystems) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < n_subsystems; ++s)
    if (!std::binary_search(subset.begin(), subset.end(), s)) out.push_back(s);
  return out;
}

inline std::vector<std::size_t> merge_sorted(std::vector<std::size_t> a,
                                             const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace detail

// S(A) + S(B) - S(AB) across the cut side_a | complement.
inline double mutual_information(const DensityMatrix& rho,
                                 const std::vector<std::size_t>& side_a) {
  detail::check_subset(side_a, rho.num_subsystems(), "mutual_information");
  const auto side_b = detail::complement_of(side_a, rho.num_subsystems());
  if (side_b.empty())
    throw std::invalid_argument("mutual_information: partition must leave both sides nonempty");
  const double s_a = entropy_psd(partial_trace(rho.mat(), rho.dims(), side_a));
  const double s_b = entropy_psd(partial_trace(rho.mat(), rho.dims(), side_b));
  const double s_ab = entropy_psd(rho.mat());
  return s_a + s_b - s_ab;
}

// S(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C). The three groups must partition
// the subsystems.
inline double conditional_mutual_information(const DensityMatrix& rho,
                                             const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b,
                                             const std::vector<std::size_t>& c) {
  const std::size_t n = rho.num_subsystems();
  detail::check_subset(a, n, "conditional_mutual_information");
  detail::check_subset(b, n, "conditional_mutual_information");
  detail::check_subset(c, n, "conditional_mutual_information");
  const auto ac = detail::merge_sorted(a, c);
  const auto bc = detail::merge_sorted(b, c);
  auto all = detail::merge_sorted(ac, b);
  if (all.size() != n || std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument(
        "conditional_mutual_information: groups must be disjoint and cover all subsystems");
  const double s_ac = entropy_psd(partial_trace(rho.mat(), rho.dims(), ac));
  const double s_bc = entropy_psd(partial_trace(rho.mat(), rho.dims(), bc));
  const double s_abc = entropy_psd(rho.mat());
  const double s_c = entropy_psd(partial_trace(rho.mat(), rho.dims(), c));
  return s_ac + s_bc - s_abc - s_c;
}

// Ensemble {p_i, rho_i}: alphabet of signal states.
class Ensemble {
 public:
  struct Item {
    double probability;
    DensityMatrix state;
  };

  explicit Ensemble(std::vector<Item> items) : items_(std::move(items)) {
    if (items_.empty()) throw std::invalid_argument("Ensemble: empty");
    double sum = 0.0;
    for (const auto& it : items_) {
      if (it.probability < 0.0) throw std::invalid_argument("Ensemble: negative probability");
      if (it.state.dims() != items_.front().state.dims())
        throw std::invalid_argument("Ensemble: mixed subsystem dims");
      sum += it.probability;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
      throw std::invalid_argument("Ensemble: probabilities do not sum to 1");
  }

  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t dim() const { return items_.front().state.dim(); }
  const std::vector<std::size_t>& dims() const { return items_.front().state.dims(); }

  ComplexMatrix average_mat() const {
    ComplexMatrix avg(dim(), dim());
    for (const auto& it : items_) avg += it.probability * it.state.mat();
    return avg;
  }
  DensityMatrix average() const { return DensityMatrix(average_mat(), dims()); }

 private:
  std::vector<Item> items_;
};

// Classical-quantum state: probability-weighted, label-indexed branches over
// a shared quantum register layout. The classical register is never
// materialized as a matrix; embed_cq() produces the explicit block-diagonal
// form when needed.
class CQState {
 public:
  struct Branch {
    double probability;
    int label;
    DensityMatrix state;
  };

  explicit CQState(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw std::invalid_argument("CQState: empty");
    double sum = 0.0;
    for (const auto& b : branches_) {
      if (b.probability < -1e-12 || b.probability > 1.0 + 1e-12)
        throw std::invalid_argument("CQState: probability outside [0,1]");
      if (b.state.dims() != branches_.front().state.dims())
        throw std::invalid_argument("CQState: branches have differing subsystem dims");
      sum += b.probability;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
      throw std::invalid_argument("CQState: probabilities do not sum to 1");
    for (std::size_t i = 0; i < branches_.size(); ++i)
      for (std::size_t j = i + 1; j < branches_.size(); ++j)
        if (branches_[i].label == branches_[j].label)
          throw std::invalid_argument("CQState: duplicate branch labels");
  }

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t size() const { return branches_.size(); }
  const std::vector<std::size_t>& quantum_dims() const { return branches_.front().state.dims(); }
  std::size_t quantum_dim() const { return branches_.front().state.dim(); }

 private:
  std::vector<Branch> branches_;
};

// S(M : subset) for a CQ state = S(rho_bar) - sum_i p_i S(rho^i), reduced to
// the chosen quantum registers. (The classical entropy H(p) cancels.)
inline double cq_mutual_information(const CQState& s, const std::vector<std::size_t>& subset) {
  detail::check_subset(subset, s.quantum_dims().size(), "cq_mutual_information");
  const bool all = subset.size() == s.quantum_dims().size();

  ComplexMatrix avg;
  double mean_branch_entropy = 0.0;
  bool first = true;
  for (const auto& b : s.branches()) {
    ComplexMatrix red = all ? b.state.mat() : partial_trace(b.state.mat(), b.state.dims(), subset);
    if (b.probability > 0.0) mean_branch_entropy += b.probability * entropy_psd(red);
    red *= complex(b.probability, 0.0);
    if (first) {
      avg = std::move(red);
      first = false;
    } else {
      avg += red;
    }
  }
  return entropy_psd(avg) - mean_branch_entropy;
}

// S(M,side : target): mutual information with some quantum registers grouped
// onto the classical side. Equals
//   sum_i p_i [S(rho^i_side) - S(rho^i_{side+target})] + S(rho_bar_target).
inline double cq_mutual_information_grouped(const CQState& s,
                                            const std::vector<std::size_t>& side,
                                            const std::vector<std::size_t>& target) {
  const std::size_t n = s.quantum_dims().size();
  detail::check_subset(side, n, "cq_mutual_information_grouped");
  detail::check_subset(target, n, "cq_mutual_information_grouped");
  const auto both = detail::merge_sorted(side, target);
  if (std::adjacent_find(both.begin(), both.end()) != both.end())
    throw std::invalid_argument("cq_mutual_information_grouped: side and target overlap");

  ComplexMatrix avg_target;
  double acc = 0.0;
  bool first = true;
  for (const auto& b : s.branches()) {
    const auto& m = b.state.mat();
    const auto& d = b.state.dims();
    if (b.probability > 0.0) {
      const double s_side = entropy_psd(partial_trace(m, d, side));
      const double s_both =
          both.size() == n ? entropy_psd(m) : entropy_psd(partial_trace(m, d, both));
      acc += b.probability * (s_side - s_both);
    }
    ComplexMatrix red = partial_trace(m, d, target);
    red *= complex(b.probability, 0.0);
    if (first) {
      avg_target = std::move(red);
      first = false;
    } else {
      avg_target += red;
    }
  }
  return acc + entropy_psd(avg_target);
}

// Explicit embedding of a CQ state: the classical label becomes an orthogonal
// basis register in front of the quantum ones.
inline DensityMatrix embed_cq(const CQState& s) {
  const std::size_t k = s.size();
  const std::size_t d = s.quantum_dim();
  ComplexMatrix m(k * d, k * d);
  for (std::size_t b = 0; b < k; ++b) {
    const auto& br = s.branches()[b];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(b * d + r, b * d + c) = br.probability * br.state.mat()(r, c);
  }
  std::vector<std::size_t> dims = {k};
  dims.insert(dims.end(), s.quantum_dims().begin(), s.quantum_dims().end());
  return DensityMatrix(std::move(m), std::move(dims));
}

// Shannon entropy of a probability vector, in bits.
inline double shannon_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace qfb
