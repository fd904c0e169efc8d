#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entbound/errors.hpp"

namespace entbound {

using cplx = std::complex<double>;
using Index = std::uint64_t;
using MultiIndex = std::vector<std::size_t>;
using DensityMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kDegenerateNorm = 1e-12;
inline constexpr double kEigenClamp = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-10;
inline constexpr Index kMaxDenseAmplitudes = Index{1} << 24;

enum class Normalization { required, unchecked };

// Multipartite pure state over parties with local dimensions dims[0..N).
// Basis labels are packed row-major: party 0 is the most significant digit.
// Storage is either a full amplitude vector or a sorted list of nonzeros;
// every query gives the same answer for both.
class PureState {
public:
  struct Entry {
    Index index;
    cplx amp;
  };

  PureState() = default;

  static PureState dense(std::vector<std::size_t> dims, std::vector<cplx> amps,
                         Normalization policy = Normalization::required) {
    PureState s(std::move(dims));
    if (s.size_ > kMaxDenseAmplitudes)
      throw resource_limit("dense state would need " + std::to_string(s.size_) +
                           " amplitudes (limit 2^24); use sparse storage");
    if (amps.size() != s.size_)
      throw invalid_argument("amplitude count " + std::to_string(amps.size()) +
                             " does not match product of dims " + std::to_string(s.size_));
    s.sparse_ = false;
    s.dense_ = std::move(amps);
    s.finish(policy);
    return s;
  }

  // Entries may arrive in any order; duplicates are rejected and exact zeros dropped.
  static PureState sparse(std::vector<std::size_t> dims, std::vector<Entry> entries,
                          Normalization policy = Normalization::required) {
    PureState s(std::move(dims));
    std::sort(entries.begin(), entries.end(),
              [](const Entry& l, const Entry& r) { return l.index < r.index; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].index >= s.size_)
        throw invalid_argument("basis index out of range for dims");
      if (i > 0 && entries[i].index == entries[i - 1].index)
        throw invalid_argument("duplicate basis index in sparse state");
    }
    std::erase_if(entries, [](const Entry& e) { return e.amp == cplx{}; });
    s.sparse_ = true;
    s.entries_ = std::move(entries);
    s.finish(policy);
    return s;
  }

  static PureState sparse_from_labels(std::vector<std::size_t> dims,
                                      const std::vector<std::pair<MultiIndex, cplx>>& terms,
                                      Normalization policy = Normalization::required) {
    PureState shape(dims);
    std::vector<Entry> entries;
    entries.reserve(terms.size());
    for (const auto& [labels, amp] : terms) entries.push_back({shape.encode(labels), amp});
    return sparse(std::move(dims), std::move(entries), policy);
  }

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t party_count() const noexcept { return dims_.size(); }
  Index size() const noexcept { return size_; }
  bool is_sparse() const noexcept { return sparse_; }
  bool normalized() const noexcept { return normalized_; }
  double norm_sq() const noexcept { return norm_sq_; }

  std::size_t nonzero_count() const noexcept {
    if (sparse_) return entries_.size();
    return static_cast<std::size_t>(std::count_if(
        dense_.begin(), dense_.end(), [](const cplx& c) { return c != cplx{}; }));
  }

  Index stride(std::size_t party) const { return strides_.at(party); }

  std::size_t label(Index index, std::size_t party) const {
    return static_cast<std::size_t>((index / strides_[party]) % dims_[party]);
  }

  Index encode(const MultiIndex& labels) const {
    if (labels.size() != dims_.size())
      throw invalid_argument("multi-index has " + std::to_string(labels.size()) +
                             " labels, state has " + std::to_string(dims_.size()) + " parties");
    Index idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      if (labels[k] >= dims_[k]) throw invalid_argument("basis label out of range for dims");
      idx += labels[k] * strides_[k];
    }
    return idx;
  }

  MultiIndex decode(Index index) const {
    MultiIndex out(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) out[k] = label(index, k);
    return out;
  }

  cplx amplitude(Index index) const {
    if (index >= size_) throw invalid_argument("basis index out of range");
    if (!sparse_) return dense_[index];
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, Index i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->amp : cplx{};
  }

  cplx amplitude(const MultiIndex& labels) const { return amplitude(encode(labels)); }

  // f(Index, cplx) over every stored nonzero amplitude, in increasing index order.
  template <class F>
  void for_each_nonzero(F&& f) const {
    if (sparse_) {
      for (const auto& e : entries_) f(e.index, e.amp);
    } else {
      for (Index i = 0; i < size_; ++i)
        if (dense_[i] != cplx{}) f(i, dense_[i]);
    }
  }

  std::span<const cplx> dense_amplitudes() const {
    if (sparse_) throw invalid_argument("state uses sparse storage");
    return dense_;
  }

  std::span<const Entry> sparse_entries() const {
    if (!sparse_) throw invalid_argument("state uses dense storage");
    return entries_;
  }

  PureState to_dense() const {
    if (!sparse_) return *this;
    if (size_ > kMaxDenseAmplitudes)
      throw resource_limit("dense representation would need " + std::to_string(size_) +
                           " amplitudes (limit 2^24)");
    std::vector<cplx> amps(size_);
    for (const auto& e : entries_) amps[e.index] = e.amp;
    return dense(dims_, std::move(amps), Normalization::unchecked);
  }

  PureState to_sparse() const {
    if (sparse_) return *this;
    std::vector<Entry> entries;
    for_each_nonzero([&](Index i, cplx a) { entries.push_back({i, a}); });
    return sparse(dims_, std::move(entries), Normalization::unchecked);
  }

private:
  explicit PureState(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw invalid_argument("a state needs at least one party");
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
      if (dims_[k] == 0) throw invalid_argument("local dimensions must be positive");
      strides_[k] = size_;
      if (size_ > std::numeric_limits<Index>::max() / dims_[k])
        throw resource_limit("product of dims overflows 64-bit index");
      size_ *= dims_[k];
    }
  }

  void finish(Normalization policy) {
    double acc = 0.0;
    for_each_nonzero([&](Index, cplx a) { acc += std::norm(a); });
    norm_sq_ = acc;
    normalized_ = std::abs(norm_sq_ - 1.0) <= kNormTolerance;
    if (policy == Normalization::required && !normalized_)
      throw not_normalized("state has squared norm " + std::to_string(norm_sq_) +
                           ", expected 1 within 1e-10");
  }

  std::vector<std::size_t> dims_;
  std::vector<Index> strides_;
  Index size_ = 0;
  bool sparse_ = false;
  std::vector<cplx> dense_;
  std::vector<Entry> entries_;
  double norm_sq_ = 0.0;
  bool normalized_ = false;
};

inline void require_normalized(const PureState& s, std::string_view who) {
  if (!s.normalized())
    throw not_normalized(std::string(who) + ": input state is not normalized (norm^2 = " +
                         std::to_string(s.norm_sq()) + ")");
}

inline cplx inner_product(const PureState& lhs, const PureState& rhs) {
  if (lhs.dims() != rhs.dims())
    throw incompatible_states("inner_product: states have different dims");
  cplx acc{};
  if (!lhs.is_sparse() && !rhs.is_sparse()) {
    auto l = lhs.dense_amplitudes();
    auto r = rhs.dense_amplitudes();
    for (std::size_t i = 0; i < l.size(); ++i) acc += std::conj(l[i]) * r[i];
    return acc;
  }
  if (lhs.is_sparse() && rhs.is_sparse()) {
    auto l = lhs.sparse_entries();
    auto r = rhs.sparse_entries();
    std::size_t i = 0, j = 0;
    while (i < l.size() && j < r.size()) {
      if (l[i].index < r[j].index) {
        ++i;
      } else if (r[j].index < l[i].index) {
        ++j;
      } else {
        acc += std::conj(l[i].amp) * r[j].amp;
        ++i;
        ++j;
      }
    }
    return acc;
  }
  if (lhs.is_sparse()) {
    auto r = rhs.dense_amplitudes();
    for (const auto& e : lhs.sparse_entries()) acc += std::conj(e.amp) * r[e.index];
  } else {
    auto l = lhs.dense_amplitudes();
    for (const auto& e : rhs.sparse_entries()) acc += std::conj(l[e.index]) * e.amp;
  }
  return acc;
}

// How the coefficients of a superposition are constrained.
//   unit_weights:   sum |a_i|^2 = 1, the result is renormalized by superpose().
//   unit_superposition: || sum a_i psi_i || = 1 already (no renormalization needed).
enum class CoefficientConvention { unit_weights, unit_superposition };

class SuperpositionSpec {
public:
  SuperpositionSpec(std::vector<cplx> coefficients, std::vector<PureState> components,
                    CoefficientConvention convention = CoefficientConvention::unit_weights)
      : coefficients_(std::move(coefficients)),
        components_(std::move(components)),
        convention_(convention) {
    if (components_.empty()) throw invalid_argument("superposition needs at least one component");
    if (coefficients_.size() != components_.size())
      throw invalid_argument("coefficient count does not match component count");
    for (const auto& c : components_) {
      if (c.dims() != components_.front().dims())
        throw incompatible_states("superposition components have different dims");
      require_normalized(c, "superposition component");
    }
    const std::size_t n = components_.size();
    gram_.assign(n * n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
      gram_[k * n + k] = cplx{components_[k].norm_sq(), 0.0};
      for (std::size_t l = k + 1; l < n; ++l) {
        gram_[k * n + l] = inner_product(components_[k], components_[l]);
        gram_[l * n + k] = std::conj(gram_[k * n + l]);
      }
    }
    if (convention_ == CoefficientConvention::unit_weights) {
      double w = 0.0;
      for (const auto& a : coefficients_) w += std::norm(a);
      if (std::abs(w - 1.0) > kNormTolerance)
        throw invalid_argument("coefficients must satisfy sum |a_i|^2 = 1 (got " +
                               std::to_string(w) + ")");
    } else if (std::abs(superposition_norm_sq() - 1.0) > kNormTolerance) {
      throw not_normalized("superposition sum a_i psi_i must already be normalized (norm^2 = " +
                           std::to_string(superposition_norm_sq()) + ")");
    }
  }

  std::span<const cplx> coefficients() const noexcept { return coefficients_; }
  std::span<const PureState> components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }
  CoefficientConvention convention() const noexcept { return convention_; }
  const std::vector<std::size_t>& dims() const noexcept { return components_.front().dims(); }

  // <psi_k|psi_l>
  cplx overlap(std::size_t k, std::size_t l) const { return gram_.at(k * size() + l); }

  // || sum a_i psi_i ||^2 evaluated from the Gram matrix.
  double superposition_norm_sq() const {
    const std::size_t n = size();
    cplx acc{};
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        acc += std::conj(coefficients_[k]) * coefficients_[l] * gram_[k * n + l];
    return std::max(acc.real(), 0.0);
  }

private:
  std::vector<cplx> coefficients_;
  std::vector<PureState> components_;
  CoefficientConvention convention_;
  std::vector<cplx> gram_;
};

struct Superposed {
  PureState state;
  double norm = 0.0;  // || sum a_i psi_i || before renormalization
};

inline Superposed superpose(const SuperpositionSpec& spec) {
  const auto comps = spec.components();
  const auto coeffs = spec.coefficients();
  const bool all_sparse =
      std::all_of(comps.begin(), comps.end(), [](const PureState& s) { return s.is_sparse(); });

  if (all_sparse) {
    std::unordered_map<Index, cplx> acc;
    for (std::size_t i = 0; i < comps.size(); ++i)
      comps[i].for_each_nonzero([&](Index idx, cplx amp) { acc[idx] += coeffs[i] * amp; });
    double norm_sq = 0.0;
    for (const auto& [idx, amp] : acc) norm_sq += std::norm(amp);
    const double norm = std::sqrt(norm_sq);
    if (norm < kDegenerateNorm)
      throw degenerate_superposition("superposition components cancel (norm < 1e-12)");
    std::vector<PureState::Entry> entries;
    entries.reserve(acc.size());
    for (const auto& [idx, amp] : acc)
      if (std::abs(amp) > 0.0) entries.push_back({idx, amp / norm});
    return {PureState::sparse(spec.dims(), std::move(entries), Normalization::unchecked), norm};
  }

  std::vector<cplx> amps(static_cast<std::size_t>(comps.front().size()));
  for (std::size_t i = 0; i < comps.size(); ++i)
    comps[i].for_each_nonzero([&](Index idx, cplx amp) { amps[idx] += coeffs[i] * amp; });
  double norm_sq = 0.0;
  for (const auto& a : amps) norm_sq += std::norm(a);
  const double norm = std::sqrt(norm_sq);
  if (norm < kDegenerateNorm)
    throw degenerate_superposition("superposition components cancel (norm < 1e-12)");
  for (auto& a : amps) a /= norm;
  return {PureState::dense(spec.dims(), std::move(amps), Normalization::unchecked), norm};
}

// Partial trace keeping the listed parties (in the listed order). Nonzero
// amplitudes are bucketed by the labels of the traced-out parties, so sparse
// states never get expanded.
inline DensityMatrix reduced_density_matrix(const PureState& state,
                                            std::span<const std::size_t> keep) {
  require_normalized(state, "reduced_density_matrix");
  const std::size_t n = state.party_count();
  if (keep.empty()) throw invalid_argument("reduced_density_matrix: no parties kept");
  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n) throw invalid_argument("reduced_density_matrix: party index out of range");
    if (kept[k]) throw invalid_argument("reduced_density_matrix: party listed twice");
    kept[k] = true;
  }

  Index kept_dim = 1;
  for (auto k : keep) kept_dim *= state.dims()[k];
  if (kept_dim > 4096) throw resource_limit("reduced density matrix larger than 4096 x 4096");

  auto split = [&](Index idx) {
    Index row = 0, rest = 0;
    for (auto k : keep) row = row * state.dims()[k] + state.label(idx, k);
    for (std::size_t k = 0; k < n; ++k)
      if (!kept[k]) rest = rest * state.dims()[k] + state.label(idx, k);
    return std::pair{row, rest};
  };

  std::unordered_map<Index, std::vector<std::pair<Index, cplx>>> buckets;
  state.for_each_nonzero([&](Index idx, cplx amp) {
    auto [row, rest] = split(idx);
    buckets[rest].emplace_back(row, amp);
  });

  const auto d = static_cast<Eigen::Index>(kept_dim);
  DensityMatrix rho = DensityMatrix::Zero(d, d);
  for (const auto& [rest, column] : buckets)
    for (const auto& [i, ai] : column)
      for (const auto& [j, aj] : column)
        rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += ai * std::conj(aj);
  return rho;
}

inline DensityMatrix reduced_density_matrix(const PureState& state, std::size_t keep) {
  const std::size_t parties[] = {keep};
  return reduced_density_matrix(state, std::span<const std::size_t>(parties));
}

// -sum p log2 p over a probability vector, 0 log 0 := 0.
inline double shannon_entropy_bits(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities)
    if (p > 0.0) s -= p * std::log2(p);
  return std::max(s, 0.0);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw invalid_density_matrix("density matrix must be square and nonempty");
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kNegativeEigenTolerance)
    throw invalid_density_matrix("density matrix is not hermitian (deviation " +
                                 std::to_string(asym) + ")");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kNormTolerance)
    throw invalid_density_matrix("density matrix trace is " + std::to_string(trace));

  Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw invalid_density_matrix("eigenvalue decomposition failed");
  std::vector<double> spectrum(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    double lambda = solver.eigenvalues()(i);
    if (lambda < -kNegativeEigenTolerance)
      throw invalid_density_matrix("negative eigenvalue " + std::to_string(lambda));
    spectrum[static_cast<std::size_t>(i)] = lambda < kEigenClamp ? 0.0 : lambda;
  }
  return shannon_entropy_bits(spectrum);
}

struct EntropyProfile {
  std::vector<double> per_party;  // bits
  double total = 0.0;             // bits; the pure-state q-squashed entanglement
};

inline EntropyProfile entropy_profile(const PureState& state) {
  require_normalized(state, "entropy_profile");
  EntropyProfile out;
  out.per_party.reserve(state.party_count());
  for (std::size_t k = 0; k < state.party_count(); ++k) {
    const double cap = std::log2(static_cast<double>(state.dims()[k]));
    const double s = von_neumann_entropy(reduced_density_matrix(state, k));
    out.per_party.push_back(std::clamp(s, 0.0, cap));
  }
  out.total = std::accumulate(out.per_party.begin(), out.per_party.end(), 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical families.

enum class Family { ghz, w, example2_psi1, example2_psi2, example3_psi1, example3_psi2 };

struct FamilyParams {
  std::size_t parties = 3;  // N
  std::size_t d = 2;        // local levels (GHZ, ex2 family) or top label (ex3 family)
  double epsilon = 0.0;     // ex3 family only
};

inline Family family_from_string(std::string_view name) {
  if (name == "ghz") return Family::ghz;
  if (name == "w") return Family::w;
  if (name == "ex2-psi1") return Family::example2_psi1;
  if (name == "ex2-psi2") return Family::example2_psi2;
  if (name == "ex3-psi1") return Family::example3_psi1;
  if (name == "ex3-psi2") return Family::example3_psi2;
  throw invalid_argument("unknown state family '" + std::string(name) + "'");
}

namespace detail {

inline MultiIndex repeated(std::size_t label, std::size_t parties) {
  return MultiIndex(parties, label);
}

// sqrt(1/10)|1..1> +/- sqrt(9/10) sqrt(1/(d-1)) (|2..2> + ... + |d..d>), labels shifted to 0-based.
inline PureState example2_state(std::size_t parties, std::size_t d, double sign) {
  if (parties < 1) throw invalid_argument("ex2 states need N >= 1");
  if (d < 2) throw invalid_argument("ex2 states need d >= 2");
  std::vector<std::pair<MultiIndex, cplx>> terms;
  terms.emplace_back(repeated(0, parties), cplx{std::sqrt(0.1), 0.0});
  const double tail = sign * std::sqrt(0.9) * std::sqrt(1.0 / static_cast<double>(d - 1));
  for (std::size_t j = 1; j < d; ++j) terms.emplace_back(repeated(j, parties), cplx{tail, 0.0});
  return PureState::sparse_from_labels(std::vector<std::size_t>(parties, d), terms);
}

}  // namespace detail

inline PureState make_state(Family family, const FamilyParams& p = {}) {
  switch (family) {
    case Family::ghz: {
      if (p.parties < 1) throw invalid_argument("GHZ needs N >= 1");
      if (p.d < 2) throw invalid_argument("GHZ needs d >= 2");
      std::vector<std::pair<MultiIndex, cplx>> terms;
      const double amp = 1.0 / std::sqrt(static_cast<double>(p.d));
      for (std::size_t j = 0; j < p.d; ++j)
        terms.emplace_back(detail::repeated(j, p.parties), cplx{amp, 0.0});
      auto state =
          PureState::sparse_from_labels(std::vector<std::size_t>(p.parties, p.d), terms);
      return state.size() <= kMaxDenseAmplitudes ? state.to_dense() : state;
    }
    case Family::w: {
      if (p.parties != 3) throw invalid_argument("W state is defined for N = 3 only");
      const double amp = 1.0 / std::sqrt(3.0);
      std::vector<cplx> amps(8);
      amps[0b001] = amps[0b010] = amps[0b100] = cplx{amp, 0.0};
      return PureState::dense({2, 2, 2}, std::move(amps));
    }
    case Family::example2_psi1:
      return detail::example2_state(p.parties, p.d, +1.0);
    case Family::example2_psi2:
      return detail::example2_state(p.parties, p.d, -1.0);
    case Family::example3_psi1:
    case Family::example3_psi2: {
      if (p.d < 1) throw invalid_argument("ex3 states need d >= 1");
      if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0))
        throw invalid_argument("ex3 states need epsilon in [0, 1]");
      const std::vector<std::size_t> dims(3, p.d + 1);
      if (family == Family::example3_psi1)
        return PureState::sparse_from_labels(dims, {{{0, 0, 0}, cplx{1.0, 0.0}}});
      std::vector<std::pair<MultiIndex, cplx>> terms;
      terms.emplace_back(MultiIndex{0, 0, 0}, cplx{std::sqrt(1.0 - p.epsilon), 0.0});
      const double tail = std::sqrt(p.epsilon / static_cast<double>(p.d));
      for (std::size_t j = 1; j <= p.d; ++j) terms.emplace_back(MultiIndex{j, j, j}, cplx{tail, 0.0});
      return PureState::sparse_from_labels(dims, terms);
    }
  }
  throw invalid_argument("unknown state family");
}

// ---------------------------------------------------------------------------
// Random inputs.

inline std::vector<cplx> gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& c : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
  }
  return v;
}

inline void normalize_in_place(std::vector<cplx>& v) {
  double n = 0.0;
  for (const auto& c : v) n += std::norm(c);
  n = std::sqrt(n);
  for (auto& c : v) c /= n;
}

// Haar-random unit vector of length n.
inline std::vector<cplx> haar_vector(std::size_t n, std::mt19937_64& rng) {
  auto v = gaussian_vector(n, rng);
  normalize_in_place(v);
  return v;
}

inline PureState random_state(const std::vector<std::size_t>& dims, std::uint64_t seed) {
  if (dims.empty()) throw invalid_argument("random_state: dims must be nonempty");
  Index size = 1;
  for (auto d : dims) size *= d;
  std::mt19937_64 rng(seed);
  return PureState::dense(dims, haar_vector(static_cast<std::size_t>(size), rng),
                          Normalization::unchecked);
}

// Haar unitary from the QR decomposition of a Ginibre matrix with phase fix.
inline Eigen::MatrixXcd random_unitary(std::size_t dim, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  auto g = gaussian_vector(dim * dim, rng);
  Eigen::MatrixXcd m = Eigen::Map<Eigen::MatrixXcd>(g.data(), d, d);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const cplx diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(i) *= diag / mag;
  }
  return q;
}

// rho = G G^dagger / tr, G Ginibre: a full-rank random density matrix.
inline DensityMatrix random_density_matrix(std::size_t dim, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  auto g = gaussian_vector(dim * dim, rng);
  Eigen::MatrixXcd m = Eigen::Map<Eigen::MatrixXcd>(g.data(), d, d);
  DensityMatrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

// (1 x .. x U x .. x 1)|psi> with U acting on `party`. Result has the input's storage kind.
inline PureState apply_local_unitary(const PureState& state, std::size_t party,
                                     const Eigen::MatrixXcd& unitary) {
  if (party >= state.party_count()) throw invalid_argument("apply_local_unitary: bad party");
  const auto d = state.dims()[party];
  if (unitary.rows() != static_cast<Eigen::Index>(d) || unitary.cols() != unitary.rows())
    throw invalid_argument("apply_local_unitary: unitary has wrong shape");
  const Index stride = state.stride(party);
  std::unordered_map<Index, cplx> out;
  state.for_each_nonzero([&](Index idx, cplx amp) {
    const auto j = state.label(idx, party);
    const Index base = idx - j * stride;
    for (std::size_t i = 0; i < d; ++i) {
      const cplx u = unitary(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (u != cplx{}) out[base + i * stride] += u * amp;
    }
  });
  std::vector<PureState::Entry> entries;
  entries.reserve(out.size());
  for (const auto& [idx, amp] : out) entries.push_back({idx, amp});
  auto result = PureState::sparse(state.dims(), std::move(entries), Normalization::unchecked);
  return state.is_sparse() ? result : result.to_dense();
}

}  // namespace entbound
