#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "entbound/geo_bounds.hpp"
#include "entbound/geometric.hpp"
#include "entbound/sq_bounds.hpp"
#include "entbound/state_io.hpp"
#include "entbound/states.hpp"

namespace entbound::harness {

enum class Command { fig1, fig2, example3, verify, measure };

struct RunConfig {
  Command command = Command::fig1;
  double grid_step = 0.01;
  int starts = 32;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  int trials = 200;
  std::string output_path;  // empty: stdout
  std::optional<std::size_t> d;  // fig2 panel (a): 11, example3: 16
  std::size_t n_max = 8;
  double epsilon = 0.1;
  std::vector<std::string> state_paths;
  std::optional<cplx> coeff_a;
  std::optional<cplx> coeff_b;

  GeometricOptions geometric() const {
    GeometricOptions g;
    g.starts = starts;
    g.tol = tol;
    g.seed = seed;
    return g;
  }

  void validate() const {
    if (!(grid_step > 0.0 && grid_step <= 0.5))
      throw invalid_argument("grid step must lie in (0, 0.5]");
    if (trials < 1) throw invalid_argument("trials must be >= 1");
    if (starts < 1) throw invalid_argument("starts must be >= 1");
    if (!(tol > 0.0)) throw invalid_argument("tol must be > 0");
  }
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Command output plus the number of row-level checks that failed.
struct RunResult {
  CsvTable table;
  int failures = 0;
  std::vector<std::string> messages;
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_real(*v) : "NA";
}

inline void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

// ---------------------------------------------------------------------------
// fig1: GHZ/W superposition, geometric-measure bounds against the a-grid.

inline double fig1_closed_form_lower(double a) {
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  return std::max(-a * a / 18.0 - 4.0 / (3.0 * std::sqrt(2.0)) * a * b + 5.0 / 9.0, 0.0);
}

inline double fig1_closed_form_upper(double a) {
  const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
  double up = 1.0;
  if (1.0 - a >= kBranchDenominatorFloor)
    up = std::min(up, (35.0 / 18.0 * a * a + 1.5 * a + 5.0 / 9.0) / (1.0 - a));
  if (1.0 - b >= kBranchDenominatorFloor)
    up = std::min(up, (-37.0 / 18.0 * a * a + 13.0 / 9.0 * b + 23.0 / 9.0) / (1.0 - b));
  return up;
}

inline RunResult run_fig1(const RunConfig& cfg) {
  cfg.validate();
  const auto ghz = make_state(Family::ghz);
  const auto w = make_state(Family::w);
  const auto opts = cfg.geometric();
  const double eg_ghz = lambda_max_estimate(ghz, opts).e_g;
  const double eg_w = lambda_max_estimate(w, opts).e_g;

  RunResult res;
  res.table.header = {"a",          "b",
                      "lower_thm1", "upper_thm2",
                      "e_g_estimate", "closed_form_lower",
                      "closed_form_upper", "seed"};
  const auto steps = static_cast<long long>(std::floor(1.0 / cfg.grid_step + 1e-9));
  for (long long i = 0; i <= steps; ++i) {
    const double a = std::min(1.0, static_cast<double>(i) * cfg.grid_step);
    const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
    const SuperpositionSpec spec({cplx{a, 0.0}, cplx{b, 0.0}}, {ghz, w});
    const double lower = thm1_lower(spec, eg_ghz, eg_w);
    const double upper = thm2_upper(spec, eg_ghz, eg_w).value;
    const double eg = lambda_max_estimate(superpose(spec).state, opts).e_g;
    const double cf_lower = fig1_closed_form_lower(a);
    const double cf_upper = fig1_closed_form_upper(a);

    auto check = [&](bool ok, const std::string& what) {
      if (!ok) {
        ++res.failures;
        res.messages.push_back("a=" + format_real(a) + ": " + what);
      }
    };
    check(std::abs(lower - cf_lower) <= 1e-9, "lower bound differs from closed form");
    check(std::abs(upper - cf_upper) <= 1e-9, "upper bound differs from closed form");
    check(lower <= upper + 1e-9, "lower bound exceeds upper bound");

    res.table.rows.push_back({format_real(a), format_real(b), format_real(lower),
                              format_real(upper), format_real(eg), format_real(cf_lower),
                              format_real(cf_upper), std::to_string(cfg.seed)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// fig2: ex2-family superpositions, exact q-squashed entanglement vs upper bounds.

struct Fig2Row {
  char panel = 'a';
  std::size_t parties = 0;
  std::size_t d = 0;
  double e_sq_gamma = 0.0;
  double upper_thm3 = 0.0;
  std::optional<double> upper_thm4;
  double closed_form = 0.0;
};

inline Fig2Row fig2_row(char panel, std::size_t parties, std::size_t d) {
  const FamilyParams p{parties, d, 0.0};
  const auto psi1 = make_state(Family::example2_psi1, p);
  const auto psi2 = make_state(Family::example2_psi2, p);
  const double h = 1.0 / std::sqrt(2.0);
  const SuperpositionSpec spec({cplx{h, 0.0}, cplx{-h, 0.0}}, {psi1, psi2});
  const double esq1 = entropy_profile(psi1).total;
  const double esq2 = entropy_profile(psi2).total;
  Fig2Row row;
  row.panel = panel;
  row.parties = parties;
  row.d = d;
  row.e_sq_gamma = entropy_profile(superpose(spec).state).total;
  row.upper_thm3 = thm3_upper(spec, esq1, esq2, parties);
  if (auto t4 = thm4_upper(spec, esq1, esq2, parties)) row.upper_thm4 = t4->value;
  row.closed_form = static_cast<double>(parties) * std::log2(static_cast<double>(d - 1));
  return row;
}

inline RunResult run_fig2(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t d_a = cfg.d.value_or(11);
  if (d_a < 2) throw invalid_argument("fig2 needs d >= 2");
  if (cfg.n_max < 2) throw invalid_argument("fig2 needs n-max >= 2");

  std::vector<Fig2Row> rows;
  for (std::size_t n = 2; n <= cfg.n_max; ++n) rows.push_back(fig2_row('a', n, d_a));
  for (std::size_t d = 2; d <= 8; ++d) rows.push_back(fig2_row('b', 3, d));

  RunResult res;
  res.table.header = {"panel",      "N",          "d",          "e_sq_gamma",
                      "upper_thm3", "upper_thm4", "closed_form", "gap_thm3"};
  for (const auto& r : rows) {
    const std::string where = std::string("panel ") + r.panel + " N=" + std::to_string(r.parties) +
                              " d=" + std::to_string(r.d);
    if (!(r.e_sq_gamma <= r.upper_thm3)) {
      ++res.failures;
      res.messages.push_back(where + ": e_sq_gamma exceeds upper_thm3");
    }
    if (std::abs(r.e_sq_gamma - r.closed_form) > 1e-10) {
      ++res.failures;
      res.messages.push_back(where + ": e_sq_gamma differs from N log2(d-1)");
    }
    res.table.rows.push_back({std::string(1, r.panel), std::to_string(r.parties),
                              std::to_string(r.d), format_real(r.e_sq_gamma),
                              format_real(r.upper_thm3), format_optional(r.upper_thm4),
                              format_real(r.closed_form),
                              format_real(r.upper_thm3 - r.e_sq_gamma)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// example3: high fidelity, very different q-squashed entanglement.

inline RunResult run_example3(const RunConfig& cfg) {
  const std::size_t d = cfg.d.value_or(16);
  const auto r = example3_report(cfg.epsilon, d);
  RunResult res;
  res.table.header = {"epsilon", "d", "fidelity", "esq1", "esq2", "esq2_approx"};
  res.table.rows.push_back({format_real(cfg.epsilon), std::to_string(d), format_real(r.fidelity),
                            format_real(r.esq1), format_real(r.esq2),
                            format_real(r.esq2_approx)});
  return res;
}

// ---------------------------------------------------------------------------
// verify: randomized property suite.

struct PropertyTally {
  std::string name;
  int trials = 0;
  int failures = 0;
  double max_violation = 0.0;

  // Records `excess` = amount by which the inequality is violated (<= 0 when it holds).
  void record(double excess, double tolerance) {
    ++trials;
    if (excess > max_violation) max_violation = excess;
    if (!(excess <= tolerance)) ++failures;
  }
};

namespace detail {

inline std::mt19937_64 trial_rng(std::uint64_t seed, int property, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(property), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

inline std::uint64_t draw_seed(std::mt19937_64& rng) { return rng(); }

// (a, b) with |a|^2 + |b|^2 = 1 and independent phases.
inline std::pair<cplx, cplx> random_weights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = u(rng) * std::acos(-1.0) / 2.0;
  const double pa = u(rng) * 2.0 * std::acos(-1.0);
  const double pb = u(rng) * 2.0 * std::acos(-1.0);
  return {std::polar(std::cos(theta), pa), std::polar(std::sin(theta), pb)};
}

// x = k / 2^53 with 0 < k < 2^53, so 1 - x is exact in double precision.
inline double lattice_unit(std::mt19937_64& rng) {
  const std::uint64_t k = (rng() >> 11) | 1u;
  return std::ldexp(static_cast<double>(k), -53);
}

}  // namespace detail

inline std::vector<PropertyTally> verify_properties(const RunConfig& cfg) {
  cfg.validate();
  const auto opts = cfg.geometric();
  const std::vector<std::size_t> qubits3{2, 2, 2};

  std::vector<PropertyTally> out;
  auto tally = [&](const std::string& name) -> PropertyTally& {
    out.push_back({name});
    return out.back();
  };

  // Properties sharing one random superposition per trial.
  {
    PropertyTally thm1{"thm1_lower_le_e_g"}, weak{"weak_lower_le_thm1"},
        prop{"proposition_n2_equals_thm1"}, thm2{"e_g_le_thm2_upper_certified"},
        sq3{"e_sq_le_thm3"}, sq4{"e_sq_le_thm4"}, dom{"thm4_le_thm3"}, sq5{"thm5_le_e_sq"},
        stat{"thm4_stationarity_residual"}, norm{"superpose_normalized"},
        mono{"alternating_monotone"};
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 1, t);
      const auto psi1 = random_state(qubits3, detail::draw_seed(rng));
      const auto psi2 = random_state(qubits3, detail::draw_seed(rng));
      const auto [a, b] = detail::random_weights(rng);
      const SuperpositionSpec spec({a, b}, {psi1, psi2});
      const auto gamma = superpose(spec);

      const auto g1 = lambda_max_estimate(psi1, opts);
      const auto g2 = lambda_max_estimate(psi2, opts);
      const auto gg = lambda_max_estimate(gamma.state, opts);
      const double lower = thm1_lower(spec, g1.e_g, g2.e_g);
      thm1.record(lower - gg.e_g, 1e-7);
      weak.record(weak_lower(spec, g1.e_g, g2.e_g) - lower, 1e-10);
      const double p2 = proposition_lower(spec, {g1.e_g, g2.e_g});
      prop.record(p2 == lower ? 0.0 : std::max(std::abs(p2 - lower), 1e-300), 0.0);
      if (gg.agreeing_starts >= 2) thm2.record(gg.e_g - thm2_upper(spec, g1.e_g, g2.e_g).value, 1e-6);
      for (const auto* g : {&g1, &g2, &gg}) mono.record(g->worst_step_decrease, 1e-12);
      norm.record(std::abs(inner_product(gamma.state, gamma.state).real() - 1.0), 1e-10);

      const auto sq = squashed_bound_report(spec);
      sq3.record(sq.e_sq_gamma - sq.upper_thm3, 1e-8);
      if (sq.thm4) {
        sq4.record(sq.e_sq_gamma - sq.thm4->value, 1e-8);
        dom.record(sq.thm4->value - sq.upper_thm3, 1e-9);
        if (sq.thm4->interior) stat.record(sq.thm4->residual, 1e-5);
      }
      sq5.record(sq.thm5.value - sq.e_sq_gamma, 1e-8);
    }
    for (auto* p : {&thm1, &weak, &prop, &thm2, &sq3, &sq4, &dom, &sq5, &stat, &norm, &mono})
      out.push_back(*p);
  }

  {
    auto& p = tally("thm1_saturation_identical_components");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 2, t);
      const auto psi = random_state(qubits3, detail::draw_seed(rng));
      std::uniform_real_distribution<double> u(0.05, 0.95);
      const double theta = u(rng) * std::acos(-1.0) / 2.0;
      const SuperpositionSpec spec({cplx{std::cos(theta), 0.0}, cplx{std::sin(theta), 0.0}},
                                   {psi, psi});
      const double e = lambda_max_estimate(psi, opts).e_g;
      p.record(std::abs(thm1_lower(spec, e, e) - e), 1e-9);
    }
  }

  {
    auto& p = tally("proposition_n3_le_e_g");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 3, t);
      std::vector<PureState> comps;
      std::vector<double> egs;
      for (int k = 0; k < 3; ++k) {
        comps.push_back(random_state(qubits3, detail::draw_seed(rng)));
        egs.push_back(lambda_max_estimate(comps.back(), opts).e_g);
      }
      auto w = haar_vector(3, rng);
      const SuperpositionSpec spec(w, comps);
      const double eg = lambda_max_estimate(superpose(spec).state, opts).e_g;
      p.record(proposition_lower(spec, egs) - eg, 1e-7);
    }
  }

  {
    PropertyTally lemma{"entropy_mixing_lemma"}, concave{"entropy_concavity"};
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 4, t);
      const std::size_t dim = 2 + static_cast<std::size_t>(rng() % 3);
      const auto rho = random_density_matrix(dim, rng);
      const auto sigma = random_density_matrix(dim, rng);
      const double x = detail::lattice_unit(rng);
      const double mixed = von_neumann_entropy(x * rho + (1.0 - x) * sigma);
      const double avg = x * von_neumann_entropy(rho) + (1.0 - x) * von_neumann_entropy(sigma);
      lemma.record(mixed - (avg + binary_entropy(x)), 1e-8);
      concave.record(avg - mixed, 1e-8);
    }
    out.push_back(lemma);
    out.push_back(concave);
  }

  {
    auto& p = tally("binary_entropy_symmetry");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 5, t);
      const double x = detail::lattice_unit(rng);
      p.record(std::abs(binary_entropy(x) - binary_entropy(1.0 - x)), 1e-15);
    }
  }

  {
    auto& p = tally("bipartition_entropy_symmetry");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 6, t);
      const std::vector<std::size_t> dims{2, 3, 2, 2};
      const auto psi = random_state(dims, detail::draw_seed(rng));
      const std::size_t left[] = {0, 1};
      const std::size_t right[] = {2, 3};
      const std::size_t one[] = {1};
      const std::size_t rest[] = {0, 2, 3};
      p.record(std::abs(von_neumann_entropy(reduced_density_matrix(psi, left)) -
                        von_neumann_entropy(reduced_density_matrix(psi, right))),
               1e-8);
      p.record(std::abs(von_neumann_entropy(reduced_density_matrix(psi, one)) -
                        von_neumann_entropy(reduced_density_matrix(psi, rest))),
               1e-8);
    }
  }

  {
    auto& p = tally("bipartite_oracle_equivalence");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 7, t);
      const std::vector<std::size_t> dims{2 + static_cast<std::size_t>(rng() % 3),
                                          2 + static_cast<std::size_t>(rng() % 3)};
      const auto psi = random_state(dims, detail::draw_seed(rng));
      p.record(std::abs(lambda_max_estimate(psi, opts).lambda_max -
                        lambda_max_bipartite_exact(psi).lambda_max),
               1e-8);
    }
  }

  {
    auto& p = tally("bruteforce_le_estimate");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 8, t);
      const auto psi = random_state(qubits3, detail::draw_seed(rng));
      p.record(lambda_max_bruteforce(psi, 2000, detail::draw_seed(rng)) -
                   lambda_max_estimate(psi, opts).lambda_max,
               1e-9);
    }
  }

  {
    auto& p = tally("local_unitary_invariance");
    for (int t = 0; t < cfg.trials; ++t) {
      auto rng = detail::trial_rng(cfg.seed, 9, t);
      const auto psi = random_state(qubits3, detail::draw_seed(rng));
      auto rotated = psi;
      for (std::size_t k = 0; k < 3; ++k)
        rotated = apply_local_unitary(rotated, k, random_unitary(2, rng));
      p.record(std::abs(lambda_max_estimate(psi, opts).lambda_max -
                        lambda_max_estimate(rotated, opts).lambda_max),
               1e-8);
    }
  }
  return out;
}

inline RunResult run_verify(const RunConfig& cfg) {
  RunResult res;
  res.table.header = {"property", "trials", "failures", "max_violation", "seed"};
  for (const auto& p : verify_properties(cfg)) {
    res.failures += p.failures;
    if (p.failures) res.messages.push_back(p.name + ": " + std::to_string(p.failures) + " failures");
    res.table.rows.push_back({p.name, std::to_string(p.trials), std::to_string(p.failures),
                              format_real(p.max_violation), std::to_string(cfg.seed)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// measure: user-supplied states.

inline RunResult run_measure(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.state_paths.empty() || cfg.state_paths.size() > 2)
    throw invalid_argument("measure needs one or two --state files");
  std::vector<PureState> states;
  for (const auto& path : cfg.state_paths) states.push_back(read_state_file(path));
  const auto opts = cfg.geometric();

  RunResult res;
  res.table.header = {"subject", "quantity", "value"};
  auto emit = [&](const std::string& subject, const std::string& quantity, std::string value) {
    res.table.rows.push_back({subject, quantity, std::move(value)});
  };
  auto check = [&](bool ok, const std::string& what) {
    emit("check", what, ok ? "pass" : "fail");
    if (!ok) {
      ++res.failures;
      res.messages.push_back(what + " violated");
    }
  };
  emit("run", "seed", std::to_string(cfg.seed));

  auto describe = [&](const std::string& subject, const PureState& s) {
    const auto g = lambda_max_estimate(s, opts);
    const auto prof = entropy_profile(s);
    emit(subject, "lambda_max", format_real(g.lambda_max));
    emit(subject, "e_g", format_real(g.e_g));
    for (std::size_t k = 0; k < prof.per_party.size(); ++k)
      emit(subject, "S_A" + std::to_string(k + 1), format_real(prof.per_party[k]));
    emit(subject, "e_sq", format_real(prof.total));
    return std::pair{g.e_g, prof.total};
  };

  const auto [eg1, esq1] = describe("psi1", states[0]);
  if (states.size() == 1) return res;
  const auto [eg2, esq2] = describe("psi2", states[1]);
  if (states[0].dims() != states[1].dims())
    throw incompatible_states("measure: the two states have different dims");

  const double h = 1.0 / std::sqrt(2.0);
  const cplx a = cfg.coeff_a.value_or(cplx{h, 0.0});
  const cplx b = cfg.coeff_b.value_or(cplx{h, 0.0});
  const SuperpositionSpec spec({a, b}, {states[0], states[1]});
  const auto gamma = superpose(spec);
  emit("gamma", "norm_sq", format_real(gamma.norm * gamma.norm));
  const auto [eg, esq] = describe("gamma", gamma.state);

  const auto geo = geo_bound_report(spec, eg1, eg2, eg);
  const auto sq = squashed_bound_report(spec);
  emit("bounds", "lower_thm1", format_real(geo.lower_thm1));
  emit("bounds", "lower_weak", format_real(geo.lower_weak));
  emit("bounds", "upper_A", format_optional(geo.upper_a));
  emit("bounds", "upper_B", format_optional(geo.upper_b));
  emit("bounds", "upper_thm2", format_real(geo.upper_thm2));
  emit("bounds", "upper_thm3", format_real(sq.upper_thm3));
  emit("bounds", "upper_thm4", sq.thm4 ? format_real(sq.thm4->value) : "NA");
  emit("bounds", "t_star_thm4", sq.thm4 ? format_real(sq.thm4->t_star) : "NA");
  emit("bounds", "lower_thm5", format_real(sq.thm5.value));

  check(geo.lower_thm1 <= eg + 1e-7, "lower_thm1 <= e_g");
  check(eg <= geo.upper_thm2 + 1e-6, "e_g <= upper_thm2");
  check(sq.thm5.value <= esq + 1e-8, "lower_thm5 <= e_sq");
  check(esq <= sq.upper_thm3 + 1e-8, "e_sq <= upper_thm3");
  if (sq.thm4) check(esq <= sq.thm4->value + 1e-8, "e_sq <= upper_thm4");
  return res;
}

inline RunResult run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::fig1: return run_fig1(cfg);
    case Command::fig2: return run_fig2(cfg);
    case Command::example3: return run_example3(cfg);
    case Command::verify: return run_verify(cfg);
    case Command::measure: return run_measure(cfg);
  }
  throw invalid_argument("unknown command");
}

}  // namespace entbound::harness
