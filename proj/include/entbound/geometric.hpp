#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/SVD>

#include "entbound/states.hpp"

namespace entbound {

// |phi> = x_0 (x) x_1 (x) ... (x) x_{N-1}, every factor a unit vector.
struct ProductState {
  std::vector<std::vector<cplx>> factors;

  // <phi|psi>
  cplx overlap(const PureState& state) const {
    cplx acc{};
    state.for_each_nonzero([&](Index idx, cplx amp) {
      cplx w = amp;
      for (std::size_t k = 0; k < factors.size(); ++k) w *= std::conj(factors[k][state.label(idx, k)]);
      acc += w;
    });
    return acc;
  }
};

inline ProductState random_product_state(const std::vector<std::size_t>& dims,
                                         std::mt19937_64& rng) {
  ProductState p;
  p.factors.reserve(dims.size());
  for (auto d : dims) p.factors.push_back(haar_vector(d, rng));
  return p;
}

struct GeometricOptions {
  int starts = 32;
  double tol = 1e-10;
  int max_iter = 1000;
  std::uint64_t seed = 42;
};

struct GeometricResult {
  double lambda_max = 0.0;  // best squared overlap found (a lower bound on the true value)
  double e_g = 1.0;         // 1 - lambda_max
  ProductState optimizer;
  int starts_used = 0;
  int iterations = 0;       // sweeps spent by the winning start
  bool converged = false;   // winning start met the stopping rule before max_iter
  bool exact = false;       // produced by the bipartite Schmidt oracle
  int agreeing_starts = 0;  // starts whose final value is within 1e-8 of the best
  double worst_step_decrease = 0.0;  // largest drop of the overlap over any single factor update
};

namespace detail {

struct AlternatingRun {
  double lambda = 0.0;
  int sweeps = 0;
  bool converged = false;
  double worst_decrease = 0.0;
  ProductState optimizer;
};

// Nonzero amplitudes with their labels unpacked once, so each factor update
// is one pass over the support.
struct UnpackedState {
  std::vector<std::size_t> dims;
  std::vector<cplx> amps;
  std::vector<std::size_t> labels;  // row-major, amps.size() x dims.size()

  explicit UnpackedState(const PureState& s) : dims(s.dims()) {
    const auto n = dims.size();
    s.for_each_nonzero([&](Index idx, cplx amp) {
      amps.push_back(amp);
      for (std::size_t k = 0; k < n; ++k) labels.push_back(s.label(idx, k));
    });
  }
};

// Maximizes |<phi|psi>|^2 one factor at a time. With the other factors fixed
// the optimum for factor k is the normalized partial contraction
//   v_k[i] = sum_{idx: i_k = i} psi[idx] prod_{j != k} conj(x_j[i_j]),
// and the overlap after the update is ||v_k||^2, so the value never drops.
inline AlternatingRun alternating_maximize(const UnpackedState& psi, ProductState start,
                                           double tol, int max_iter) {
  const std::size_t n = psi.dims.size();
  const std::size_t nnz = psi.amps.size();
  AlternatingRun run;
  run.optimizer = std::move(start);
  auto& x = run.optimizer.factors;

  double lambda = 0.0;
  {
    cplx acc{};
    for (std::size_t e = 0; e < nnz; ++e) {
      cplx w = psi.amps[e];
      for (std::size_t j = 0; j < n; ++j) w *= std::conj(x[j][psi.labels[e * n + j]]);
      acc += w;
    }
    lambda = std::norm(acc);
  }

  std::vector<cplx> v;
  double prev_gain = -1.0;
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    const double sweep_start = lambda;
    for (std::size_t k = 0; k < n; ++k) {
      v.assign(psi.dims[k], cplx{});
      for (std::size_t e = 0; e < nnz; ++e) {
        cplx w = psi.amps[e];
        const std::size_t* lab = &psi.labels[e * n];
        for (std::size_t j = 0; j < n; ++j)
          if (j != k) w *= std::conj(x[j][lab[j]]);
        v[lab[k]] += w;
      }
      double norm_sq = 0.0;
      for (const auto& c : v) norm_sq += std::norm(c);
      if (norm_sq > 0.0) {
        const double norm = std::sqrt(norm_sq);
        for (auto& c : v) c /= norm;
        x[k] = v;
      }
      run.worst_decrease = std::max(run.worst_decrease, lambda - norm_sq);
      lambda = norm_sq;
    }
    run.sweeps = sweep;
    const double gain = lambda - sweep_start;
    // Linear convergence: with ratio r between successive gains the remaining
    // improvement is about gain * r / (1 - r). Stop only when both the last
    // gain and that tail are below tol.
    bool done = gain <= 0.0;
    if (!done && gain < tol && prev_gain > 0.0) {
      const double r = gain / prev_gain;
      done = r < 1.0 && gain * r / (1.0 - r) < tol;
    }
    prev_gain = gain;
    if (done) {
      run.converged = true;
      break;
    }
  }
  run.lambda = std::min(lambda, 1.0);
  return run;
}

inline ProductState basis_product_state(const PureState& state) {
  Index best = 0;
  double best_mag = -1.0;
  state.for_each_nonzero([&](Index idx, cplx amp) {
    if (std::norm(amp) > best_mag) {
      best_mag = std::norm(amp);
      best = idx;
    }
  });
  ProductState p;
  for (std::size_t k = 0; k < state.party_count(); ++k) {
    std::vector<cplx> f(state.dims()[k]);
    f[state.label(best, k)] = 1.0;
    p.factors.push_back(std::move(f));
  }
  return p;
}

inline std::mt19937_64 start_rng(std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

}  // namespace detail

// Multi-start alternating maximization of |<phi|psi>|^2 over fully product |phi>.
// One start at the dominant basis product state plus `starts` Haar-random
// product states; each start draws from its own seeded stream so the result
// depends only on (seed, starts).
inline GeometricResult lambda_max_estimate(const PureState& state,
                                           const GeometricOptions& opts = {}) {
  require_normalized(state, "lambda_max_estimate");
  if (opts.starts < 1) throw invalid_argument("lambda_max_estimate: starts must be >= 1");
  if (!(opts.tol > 0.0)) throw invalid_argument("lambda_max_estimate: tol must be > 0");
  if (opts.max_iter < 1) throw invalid_argument("lambda_max_estimate: max_iter must be >= 1");

  const detail::UnpackedState psi(state);
  std::vector<detail::AlternatingRun> runs;
  runs.reserve(static_cast<std::size_t>(opts.starts) + 1);
  runs.push_back(detail::alternating_maximize(psi, detail::basis_product_state(state), opts.tol,
                                              opts.max_iter));
  for (int s = 0; s < opts.starts; ++s) {
    auto rng = detail::start_rng(opts.seed, s);
    runs.push_back(detail::alternating_maximize(psi, random_product_state(state.dims(), rng),
                                                opts.tol, opts.max_iter));
  }

  const auto best = std::max_element(runs.begin(), runs.end(), [](const auto& l, const auto& r) {
    return l.lambda < r.lambda;
  });
  GeometricResult out;
  out.lambda_max = std::clamp(best->lambda, 0.0, 1.0);
  out.e_g = 1.0 - out.lambda_max;
  out.optimizer = best->optimizer;
  out.starts_used = static_cast<int>(runs.size());
  out.iterations = best->sweeps;
  out.converged = best->converged;
  for (const auto& r : runs) {
    if (best->lambda - r.lambda <= 1e-8) ++out.agreeing_starts;
    out.worst_step_decrease = std::max(out.worst_step_decrease, r.worst_decrease);
  }
  return out;
}

// Exact value for two parties: the largest squared Schmidt coefficient.
inline GeometricResult lambda_max_bipartite_exact(const PureState& state) {
  if (state.party_count() != 2)
    throw invalid_argument("lambda_max_bipartite_exact: state must have exactly 2 parties");
  require_normalized(state, "lambda_max_bipartite_exact");
  const auto d1 = static_cast<Eigen::Index>(state.dims()[0]);
  const auto d2 = static_cast<Eigen::Index>(state.dims()[1]);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d1, d2);
  state.for_each_nonzero([&](Index idx, cplx amp) {
    m(static_cast<Eigen::Index>(state.label(idx, 0)),
      static_cast<Eigen::Index>(state.label(idx, 1))) = amp;
  });
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma = svd.singularValues()(0);

  GeometricResult out;
  out.lambda_max = std::clamp(sigma * sigma, 0.0, 1.0);
  out.e_g = 1.0 - out.lambda_max;
  // <u (x) conj(v)|psi> = u^dagger M conj(conj(v)) = sigma
  std::vector<cplx> left(svd.matrixU().col(0).data(), svd.matrixU().col(0).data() + d1);
  Eigen::VectorXcd vcol = svd.matrixV().col(0).conjugate();
  std::vector<cplx> right(vcol.data(), vcol.data() + d2);
  out.optimizer.factors = {std::move(left), std::move(right)};
  out.starts_used = 0;
  out.iterations = 0;
  out.converged = true;
  out.exact = true;
  out.agreeing_starts = 0;
  return out;
}

// max over `samples` Haar-random product states of |<psi|phi>|^2; 0 for no samples.
inline double lambda_max_bruteforce(const PureState& state, long long samples,
                                    std::uint64_t seed) {
  require_normalized(state, "lambda_max_bruteforce");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (long long i = 0; i < samples; ++i) {
    const auto phi = random_product_state(state.dims(), rng);
    best = std::max(best, std::norm(phi.overlap(state)));
  }
  return std::min(best, 1.0);
}

}  // namespace entbound
