#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <limits>

#include "entbound/errors.hpp"

namespace entbound {

struct ScalarMinimum {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double bracket_lo = 0.0;  // interval the local refinement searched
  double bracket_hi = 0.0;
};

// Golden-section search for a minimum of f on [lo, hi] until the bracket is
// narrower than tol. Assumes f is unimodal on the bracket.
template <std::invocable<double> F>
ScalarMinimum golden_section_minimize(F&& f, double lo, double hi, double tol,
                                      int max_iter = 500) {
  if (!(lo <= hi)) throw invalid_argument("golden_section_minimize: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  ScalarMinimum out;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  if (fc < fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

// Global-then-local minimization on [lo, hi]: evaluate f on a uniform grid of
// grid_points (plus any extra candidate points inside the interval), then
// refine around the best grid node with golden-section search. Never returns
// a value worse than the best point evaluated.
template <std::invocable<double> F>
ScalarMinimum grid_golden_minimize(F&& f, double lo, double hi, std::size_t grid_points = 1000,
                                   double tol = 1e-10,
                                   std::initializer_list<double> candidates = {}) {
  if (grid_points < 3) throw invalid_argument("grid_golden_minimize: need >= 3 grid points");
  if (!(lo < hi)) throw invalid_argument("grid_golden_minimize: empty interval");
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  std::size_t best_i = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = i + 1 == grid_points ? hi : lo + step * static_cast<double>(i);
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_i = i;
    }
  }
  const double gx = best_i + 1 == grid_points ? hi : lo + step * static_cast<double>(best_i);
  const double blo = best_i == 0 ? lo : gx - step;
  const double bhi = best_i + 1 == grid_points ? hi : gx + step;

  ScalarMinimum out = golden_section_minimize(f, blo, bhi, tol);
  if (!(out.value <= best_f)) {
    out.x = gx;
    out.value = best_f;
  }
  for (double x : candidates) {
    if (!(x >= lo && x <= hi)) continue;
    const double fx = f(x);
    if (fx < out.value) {
      out.x = x;
      out.value = fx;
    }
  }
  out.bracket_lo = blo;
  out.bracket_hi = bhi;
  return out;
}

}  // namespace entbound
