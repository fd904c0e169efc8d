#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "entbound/states.hpp"

namespace entbound {

// Bounds on E_g(Gamma) for Gamma = sum a_i psi_i / ||sum a_i psi_i||, given the
// geometric measures of the components. Every value is divided through by
// ||sum a_i psi_i||^2, so it bounds E_g(Gamma) itself.

inline constexpr double kBranchDenominatorFloor = 1e-9;

struct GeoUpperBound {
  std::optional<double> upper_a;  // nullopt when | ||.|| - b | < 1e-9
  std::optional<double> upper_b;  // nullopt when | ||.|| - a | < 1e-9
  double raw = 1.0;               // min of the applicable terms and the cap 1
  double value = 1.0;             // raw clamped below at 0
};

struct GeoBoundReport {
  double norm_sq = 0.0;
  double lower_thm1 = 0.0;
  double lower_weak = 0.0;
  std::optional<double> upper_a;
  std::optional<double> upper_b;
  double upper_thm2 = 1.0;
  double upper_thm2_raw = 1.0;
  std::optional<double> e_g_estimate;
};

namespace detail {

inline void check_measure(double e, const char* who) {
  if (!(e >= 0.0 && e <= 1.0))
    throw invalid_argument(std::string(who) + ": geometric measures must lie in [0, 1]");
}

inline double checked_norm_sq(const SuperpositionSpec& spec, const char* who) {
  if (spec.convention() != CoefficientConvention::unit_weights)
    throw invalid_argument(std::string(who) + ": coefficients must satisfy sum |a_i|^2 = 1");
  const double norm_sq = spec.superposition_norm_sq();
  if (norm_sq < kDegenerateNorm)
    throw degenerate_superposition(std::string(who) + ": superposition norm^2 below 1e-12");
  return norm_sq;
}

inline void check_pair(const SuperpositionSpec& spec, double e1, double e2, const char* who) {
  if (spec.size() != 2) throw invalid_argument(std::string(who) + ": needs exactly 2 components");
  check_measure(e1, who);
  check_measure(e2, who);
}

}  // namespace detail

// max{ |a|^2 E1 + |b|^2 E2 + 2[Re(a* b <psi1|psi2>) - |ab| sqrt(1-E1) sqrt(1-E2)], 0 } / norm^2
inline double thm1_lower(const SuperpositionSpec& spec, double e1, double e2) {
  detail::check_pair(spec, e1, e2, "thm1_lower");
  const double norm_sq = detail::checked_norm_sq(spec, "thm1_lower");
  const cplx a = spec.coefficients()[0];
  const cplx b = spec.coefficients()[1];
  double acc = std::norm(a) * e1;
  acc += std::norm(b) * e2;
  acc += 2.0 * ((std::conj(a) * b * spec.overlap(0, 1)).real() -
                std::abs(a) * std::abs(b) * std::sqrt(1.0 - e1) * std::sqrt(1.0 - e2));
  return std::max(acc, 0.0) / norm_sq;
}

// [ |a(a+b)| E1 + |b(a+b)| E2 + 2(Re(a* b <psi1|psi2>) - |ab|) ] / norm^2, not clamped.
inline double weak_lower(const SuperpositionSpec& spec, double e1, double e2) {
  detail::check_pair(spec, e1, e2, "weak_lower");
  const double norm_sq = detail::checked_norm_sq(spec, "weak_lower");
  const cplx a = spec.coefficients()[0];
  const cplx b = spec.coefficients()[1];
  const double sum_mod = std::abs(a + b);
  const double raw = std::abs(a) * sum_mod * e1 + std::abs(b) * sum_mod * e2 +
                     2.0 * ((std::conj(a) * b * spec.overlap(0, 1)).real() -
                            std::abs(a) * std::abs(b));
  return raw / norm_sq;
}

// min{A, B, 1} with
//   A = { |a|^2 E1 - |b| |n-b| E2 + 2[Re(a* b <psi1|psi2> + |b|^2) + |b| n] } / |n-b|
//   B = the same with (a, psi1) and (b, psi2) exchanged,
// n = ||a psi1 + b psi2||, each divided by n^2.
inline GeoUpperBound thm2_upper(const SuperpositionSpec& spec, double e1, double e2) {
  detail::check_pair(spec, e1, e2, "thm2_upper");
  const double norm_sq = detail::checked_norm_sq(spec, "thm2_upper");
  const double norm = std::sqrt(norm_sq);
  const cplx a = spec.coefficients()[0];
  const cplx b = spec.coefficients()[1];

  auto branch = [&](cplx first, cplx second, double e_first, double e_second,
                    cplx overlap) -> std::optional<double> {
    const double den = std::abs(cplx{norm, 0.0} - second);
    if (den < kBranchDenominatorFloor) return std::nullopt;
    const double numer = std::norm(first) * e_first - std::abs(second) * den * e_second +
                         2.0 * ((std::conj(first) * second * overlap).real() +
                                std::norm(second) + std::abs(second) * norm);
    return numer / den / norm_sq;
  };

  GeoUpperBound out;
  out.upper_a = branch(a, b, e1, e2, spec.overlap(0, 1));
  out.upper_b = branch(b, a, e2, e1, spec.overlap(1, 0));
  out.raw = 1.0;
  if (out.upper_a) out.raw = std::min(out.raw, *out.upper_a);
  if (out.upper_b) out.raw = std::min(out.raw, *out.upper_b);
  out.value = std::max(out.raw, 0.0);
  return out;
}

// n-term generalization of thm1_lower. The cross term is summed over ordered
// pairs k != l; conjugate pairs cancel the imaginary parts, so it is
// accumulated as 2 Re(.) over k < l.
inline double proposition_lower(const SuperpositionSpec& spec, const std::vector<double>& egs) {
  const std::size_t n = spec.size();
  if (n < 2) throw invalid_argument("proposition_lower: needs at least 2 components");
  if (egs.size() != n)
    throw invalid_argument("proposition_lower: one geometric measure per component required");
  for (double e : egs) detail::check_measure(e, "proposition_lower");
  const double norm_sq = detail::checked_norm_sq(spec, "proposition_lower");
  const auto a = spec.coefficients();

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::norm(a[i]) * egs[i];

  cplx ordered{};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      if (k != l) ordered += std::conj(a[k]) * a[l] * spec.overlap(k, l);
  if (std::abs(ordered.imag()) >= 1e-10)
    throw std::logic_error("proposition_lower: cross term has imaginary residue " +
                           std::to_string(ordered.imag()));

  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l)
      acc += 2.0 * ((std::conj(a[k]) * a[l] * spec.overlap(k, l)).real() -
                    std::abs(a[k]) * std::abs(a[l]) * std::sqrt(1.0 - egs[k]) *
                        std::sqrt(1.0 - egs[l]));
  return std::max(acc, 0.0) / norm_sq;
}

inline GeoBoundReport geo_bound_report(const SuperpositionSpec& spec, double e1, double e2,
                                       std::optional<double> e_g_estimate = std::nullopt) {
  GeoBoundReport r;
  r.norm_sq = spec.superposition_norm_sq();
  r.lower_thm1 = thm1_lower(spec, e1, e2);
  r.lower_weak = weak_lower(spec, e1, e2);
  const auto up = thm2_upper(spec, e1, e2);
  r.upper_a = up.upper_a;
  r.upper_b = up.upper_b;
  r.upper_thm2 = up.value;
  r.upper_thm2_raw = up.raw;
  r.e_g_estimate = e_g_estimate;
  return r;
}

}  // namespace entbound
