#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "entbound/scalar_search.hpp"
#include "entbound/states.hpp"

namespace entbound {

// Parameter search settings for the t-optimized bounds.
inline constexpr double kEdgeGuard = 1e-6;  // t is searched on [delta, 1 - delta]
inline constexpr std::size_t kTGridPoints = 1000;
inline constexpr double kTTolerance = 1e-10;

inline double binary_entropy(double x) {
  if (!(x >= -1e-12 && x <= 1.0 + 1e-12))
    throw invalid_argument("binary_entropy: argument must lie in [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace detail {

inline void check_entropies(double esq1, double esq2, std::size_t parties, const char* who) {
  if (!(esq1 >= 0.0) || !(esq2 >= 0.0))
    throw invalid_argument(std::string(who) + ": entropies must be nonnegative");
  if (parties < 1) throw invalid_argument(std::string(who) + ": party count must be >= 1");
}

inline double unit_weight_norm_sq(const SuperpositionSpec& spec, const char* who) {
  if (spec.size() != 2) throw invalid_argument(std::string(who) + ": needs exactly 2 components");
  if (spec.convention() != CoefficientConvention::unit_weights)
    throw invalid_argument(std::string(who) + ": coefficients must satisfy |a|^2 + |b|^2 = 1");
  const double norm_sq = spec.superposition_norm_sq();
  if (norm_sq < kDegenerateNorm)
    throw degenerate_superposition(std::string(who) + ": superposition norm^2 below 1e-12");
  return norm_sq;
}

}  // namespace detail

// 2[|a|^2 E1 + |b|^2 E2 + N h2(|a|^2)] / norm^2
inline double thm3_upper(const SuperpositionSpec& spec, double esq1, double esq2,
                         std::size_t parties) {
  detail::check_entropies(esq1, esq2, parties, "thm3_upper");
  const double norm_sq = detail::unit_weight_norm_sq(spec, "thm3_upper");
  const double wa = std::norm(spec.coefficients()[0]);
  const double wb = std::norm(spec.coefficients()[1]);
  return 2.0 * (wa * esq1 + wb * esq2 + static_cast<double>(parties) * binary_entropy(wa)) /
         norm_sq;
}

struct Thm4Bound {
  double value = 0.0;     // min_t f(t) / norm^2
  double f_min = 0.0;     // min_t f(t), bounding norm^2 * E(Gamma)
  double t_star = 0.5;
  double residual = 0.0;  // |lhs - rhs| of the stationarity condition at t_star
  bool interior = false;  // t_star away from the search edges
};

// f(t) = [t|b|^2 + (1-t)|a|^2] / [t(1-t)] * [t E1 + (1-t) E2 + N h2(t)], minimized
// over t on a grid and refined by golden-section search. The minimizer is then
// polished by bisection on the analytic f'(t) inside the refined cell, which
// pins t_star to machine precision where f itself is too flat to resolve it.
// Returns nullopt when a = 0 or b = 0 (f diverges for every t).
inline std::optional<Thm4Bound> thm4_upper(const SuperpositionSpec& spec, double esq1, double esq2,
                                           std::size_t parties) {
  detail::check_entropies(esq1, esq2, parties, "thm4_upper");
  const double norm_sq = detail::unit_weight_norm_sq(spec, "thm4_upper");
  const double wa = std::norm(spec.coefficients()[0]);
  const double wb = std::norm(spec.coefficients()[1]);
  if (std::sqrt(wa) < kDegenerateNorm || std::sqrt(wb) < kDegenerateNorm) return std::nullopt;
  const double n = static_cast<double>(parties);

  auto f = [&](double t) {
    return (t * wb + (1.0 - t) * wa) / (t * (1.0 - t)) *
           (t * esq1 + (1.0 - t) * esq2 + n * binary_entropy(t));
  };
  // f'(t) = |b|^2 X / (1-t)^2 - |a|^2 Y / t^2, X = E1 - N log2 t, Y = E2 - N log2(1-t)
  auto df = [&](double t) {
    const double x = esq1 - n * std::log2(t);
    const double y = esq2 - n * std::log2(1.0 - t);
    return wb * x / ((1.0 - t) * (1.0 - t)) - wa * y / (t * t);
  };

  const double lo = kEdgeGuard;
  const double hi = 1.0 - kEdgeGuard;
  auto best = grid_golden_minimize(f, lo, hi, kTGridPoints, kTTolerance, {wa});

  double t_star = best.x;
  double value = best.value;
  double a = best.bracket_lo;
  double b = best.bracket_hi;
  if (t_star >= a && t_star <= b && df(a) < 0.0 && df(b) > 0.0) {
    for (int i = 0; i < 200 && b - a > 0.0; ++i) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (df(mid) < 0.0 ? a : b) = mid;
    }
    const double polished = 0.5 * (a + b);
    const double fp = f(polished);
    if (fp <= value + 1e-12 * std::max(1.0, std::abs(value))) {
      t_star = polished;
      value = std::min(value, fp);
    }
  }

  Thm4Bound out;
  out.f_min = value;
  out.value = value / norm_sq;
  out.t_star = t_star;
  const double lhs = wa * (1.0 - t_star) * (1.0 - t_star) / (wb * t_star * t_star);
  const double rhs =
      (esq1 - n * std::log2(t_star)) / (esq2 - n * std::log2(1.0 - t_star));
  out.residual = std::abs(lhs - rhs);
  out.interior = (t_star - lo) > 1e-6 && (hi - t_star) > 1e-6;
  return out;
}

struct Thm5Bound {
  double value = 0.0;  // max{ max_t C, max_t D, 0 }
  double c_max = 0.0;  // unclamped
  double d_max = 0.0;
  double t_star_c = 0.5;
  double t_star_d = 0.5;
  double residual_c = 0.0;  // stationarity condition for C at t_star_c
};

// Lower bound for a superposition a psi1 + b psi2 that is already normalized
// (no norm factor appears here, unlike thm3/thm4).
//   C(t) = (1-t)|b|^2 / (1 - t(1-|a|^2)) E2 - (1-t)/t E1 - (N/t) h2(t)
//   D(t) = C(t) with (a, E1) and (b, E2) exchanged
inline Thm5Bound thm5_lower(const SuperpositionSpec& spec, double esq1, double esq2,
                            std::size_t parties) {
  detail::check_entropies(esq1, esq2, parties, "thm5_lower");
  if (spec.size() != 2) throw invalid_argument("thm5_lower: needs exactly 2 components");
  const double norm_sq = spec.superposition_norm_sq();
  if (std::abs(norm_sq - 1.0) > kNormTolerance)
    throw not_normalized("thm5_lower: a psi1 + b psi2 must be normalized (norm^2 = " +
                         std::to_string(norm_sq) + ")");
  const double wa = std::norm(spec.coefficients()[0]);
  const double wb = std::norm(spec.coefficients()[1]);
  const double n = static_cast<double>(parties);

  auto family = [&](double w_self, double w_other, double e_self, double e_other) {
    return [=](double t) {
      return (1.0 - t) * w_other / (1.0 - t * (1.0 - w_self)) * e_other -
             (1.0 - t) / t * e_self - n / t * binary_entropy(t);
    };
  };
  const auto c = family(wa, wb, esq1, esq2);
  const auto d = family(wb, wa, esq2, esq1);

  const double lo = kEdgeGuard;
  const double hi = 1.0 - kEdgeGuard;
  const auto cm = grid_golden_minimize([&](double t) { return -c(t); }, lo, hi, kTGridPoints,
                                       kTTolerance);
  const auto dm = grid_golden_minimize([&](double t) { return -d(t); }, lo, hi, kTGridPoints,
                                       kTTolerance);

  Thm5Bound out;
  out.c_max = -cm.value;
  out.d_max = -dm.value;
  out.t_star_c = cm.x;
  out.t_star_d = dm.x;
  out.value = std::max({out.c_max, out.d_max, 0.0});
  const double t = cm.x;
  const double den = 1.0 - (1.0 - wa) * t;
  out.residual_c = std::abs(wa * wb * t * t / (den * den) * esq2 - (esq1 - n * std::log2(1.0 - t)));
  return out;
}

struct Example3Report {
  double fidelity = 1.0;
  double esq1 = 0.0;
  double esq2 = 0.0;
  double esq2_approx = 0.0;
};

// psi1 = |000>, psi2 = sqrt(1-eps)|000> + sqrt(eps/d)(|111> + ... + |ddd>).
// Every single-party reduction of psi2 has spectrum {1-eps, eps/d (d times)}.
inline Example3Report example3_report(double epsilon, std::size_t d) {
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw invalid_argument("example3_report: epsilon must lie in [0, 1)");
  if (d < 2) throw invalid_argument("example3_report: d must be >= 2");
  std::vector<double> spectrum(d + 1, epsilon / static_cast<double>(d));
  spectrum[0] = 1.0 - epsilon;
  Example3Report r;
  r.fidelity = 1.0 - epsilon;
  r.esq1 = 0.0;
  r.esq2 = 3.0 * shannon_entropy_bits(spectrum);
  r.esq2_approx = 3.0 * epsilon * std::log2(static_cast<double>(d));
  return r;
}

struct SquashedBoundReport {
  double esq1 = 0.0;
  double esq2 = 0.0;
  double e_sq_gamma = 0.0;
  double upper_thm3 = 0.0;
  std::optional<Thm4Bound> thm4;
  Thm5Bound thm5;
};

// Exact entropies of both components and of Gamma, then every bound. thm5_lower
// is fed the rescaled coefficients a/n, b/n so that a psi1 + b psi2 is the
// normalized Gamma itself.
inline SquashedBoundReport squashed_bound_report(const SuperpositionSpec& spec) {
  if (spec.size() != 2) throw invalid_argument("squashed_bound_report: needs 2 components");
  const auto comps = spec.components();
  const std::size_t parties = spec.dims().size();
  SquashedBoundReport r;
  r.esq1 = entropy_profile(comps[0]).total;
  r.esq2 = entropy_profile(comps[1]).total;
  const auto gamma = superpose(spec);
  r.e_sq_gamma = entropy_profile(gamma.state).total;
  r.upper_thm3 = thm3_upper(spec, r.esq1, r.esq2, parties);
  r.thm4 = thm4_upper(spec, r.esq1, r.esq2, parties);
  const SuperpositionSpec rescaled({spec.coefficients()[0] / gamma.norm,
                                    spec.coefficients()[1] / gamma.norm},
                                   {comps[0], comps[1]},
                                   CoefficientConvention::unit_superposition);
  r.thm5 = thm5_lower(rescaled, r.esq1, r.esq2, parties);
  return r;
}

}  // namespace entbound
