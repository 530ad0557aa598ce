#include "flab/distinguishers.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "flab/error.hpp"
#include "flab/gf2.hpp"

namespace flab {

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::kAlg1: return "alg1";
    case Algorithm::kAlg2: return "alg2";
    case Algorithm::kAlg3: return "alg3";
    case Algorithm::kKPlus1: return "gk";
  }
  return "?";
}

std::string_view to_string(StatisticMode mode) noexcept {
  return mode == StatisticMode::kStacked ? "stacked" : "per-coset";
}

std::string_view to_string(Label label) noexcept {
  return label == Label::kScheme ? "SCHEME" : "RP";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "alg1") return Algorithm::kAlg1;
  if (text == "alg2") return Algorithm::kAlg2;
  if (text == "alg3") return Algorithm::kAlg3;
  if (text == "gk") return Algorithm::kKPlus1;
  throw ConfigError("unknown algorithm '" + std::string(text) + "' (alg1|alg2|alg3|gk)");
}

StatisticMode parse_statistic_mode(std::string_view text) {
  if (text == "stacked") return StatisticMode::kStacked;
  if (text == "per-coset" || text == "per_coset") return StatisticMode::kPerCoset;
  throw ConfigError("unknown statistic mode '" + std::string(text) + "' (stacked|per-coset)");
}

unsigned query_budget(Algorithm algorithm, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  const double factor = algorithm == Algorithm::kAlg1 ? 1.0 : 20.0;
  const double exact = -factor * std::log(epsilon) / std::log(3.0);
  // Absorb rounding in log so that epsilon = 3^-j gives exactly factor * j.
  const double q = std::ceil(exact - 1e-9);
  return std::max(1u, static_cast<unsigned>(q));
}

double error_bound(Algorithm algorithm, unsigned q) {
  if (q == 0) throw ConfigError("error_bound: q must be >= 1");
  if (algorithm == Algorithm::kAlg1) return std::pow(3.0, -static_cast<double>(q));
  const double r = static_cast<double>(q) / 2.0;
  return std::pow(2.0, 3.0 * r) / std::pow(3.0, 2.0 * r + 1.0);
}

unsigned AlgorithmConfig::resolved_q() const {
  if (q) {
    if (*q == 0) throw ConfigError("q must be >= 1");
    return *q;
  }
  if (!epsilon) throw ConfigError("either epsilon or q must be given");
  return query_budget(algorithm, *epsilon);
}

unsigned AlgorithmConfig::resolved_samples() const {
  return samples_per_trial == 0 ? params.n + 5 : samples_per_trial;
}

unsigned AlgorithmConfig::resolved_measured_register() const {
  if (measured_register != 0) return measured_register;
  switch (algorithm) {
    case Algorithm::kAlg1: return 4;
    case Algorithm::kAlg2: return 3;
    case Algorithm::kAlg3: return 4;
    case Algorithm::kKPlus1: return params.k + 1;
  }
  return 0;
}

BlockParams AlgorithmConfig::scheme_params() const {
  switch (algorithm) {
    case Algorithm::kAlg1: return {params.n, 2, 3};
    case Algorithm::kAlg2: return {params.n, 2, 4};
    case Algorithm::kAlg3: return {params.n, 3, 4};
    case Algorithm::kKPlus1: return {params.n, params.k, params.k + 1};
  }
  return params;
}

OracleKind AlgorithmConfig::scheme_kind() const {
  switch (algorithm) {
    case Algorithm::kAlg1: return OracleKind::kVariantFeistel;
    case Algorithm::kAlg2: return OracleKind::kFeistel;
    default: return OracleKind::kUnbalanced;
  }
}

void AlgorithmConfig::validate() const {
  if (params.n == 0) throw ConfigError("n must be >= 1");
  if (algorithm == Algorithm::kKPlus1 && params.k < 4) {
    throw ConfigError("the k+1 round attack requires k >= 4, got k = " + std::to_string(params.k));
  }
  if (epsilon && !q) query_budget(algorithm, *epsilon);
  resolved_q();
  scheme_params().validate();
  const auto layout = algorithm_layout(*this);
  const unsigned reg = resolved_measured_register();
  if (reg == 0 || reg > layout.layout.size()) {
    throw ConfigError("measured register " + std::to_string(reg) + " outside a layout of " +
                      std::to_string(layout.layout.size()) + " registers");
  }
}

AlgorithmLayout algorithm_layout(const AlgorithmConfig& config) {
  const unsigned n = config.params.n;
  const std::size_t measured = config.resolved_measured_register() - 1;
  switch (config.algorithm) {
    case Algorithm::kAlg1:
      return {RegisterLayout::uniform(4, n), 0, {0, 1}, {2, 3}, std::nullopt, std::nullopt, measured};
    case Algorithm::kAlg2:
      return {RegisterLayout::uniform(4, n), 0, {0, 1}, {2, 3}, 0, 2, measured};
    case Algorithm::kAlg3:
      return {RegisterLayout::uniform(6, n), 1, {0, 1, 2}, {3, 4, 5}, 1, 3, measured};
    case Algorithm::kKPlus1: {
      const unsigned k = config.params.k;
      if (k < 4) throw ConfigError("the k+1 round attack requires k >= 4");
      AlgorithmLayout out{RegisterLayout::uniform(2 * k, n), 0, {}, {}, std::nullopt,
                          std::nullopt, measured};
      for (unsigned r = 0; r < k; ++r) {
        out.in_regs.push_back(r);
        out.out_regs.push_back(k + r);
      }
      return out;
    }
  }
  throw ConfigError("unknown algorithm");
}

Script iteration_script(const AlgorithmConfig& config) {
  const AlgorithmLayout roles = algorithm_layout(config);
  roles.layout.check_register(roles.measured);
  Script script{roles.layout, {}};
  auto& s = script.steps;
  s.emplace_back(step::Prepare{roles.superposed});
  s.emplace_back(step::Oracle{roles.in_regs, roles.out_regs});
  if (roles.xor_src) s.emplace_back(step::XorRegs{*roles.xor_src, *roles.xor_dst});
  s.emplace_back(step::Measure{roles.measured});
  if (roles.xor_src) s.emplace_back(step::XorRegs{*roles.xor_src, *roles.xor_dst});
  s.emplace_back(step::Oracle{roles.in_regs, roles.out_regs});
  s.emplace_back(step::Hadamard{roles.superposed});
  s.emplace_back(step::Sample{roles.superposed});
  return script;
}

TrialOutcome simon_trial(const OracleView& oracle, const AlgorithmConfig& config, Rng& rng) {
  const Script script = iteration_script(config);
  const unsigned samples = config.resolved_samples();
  const unsigned width = script.layout.width(algorithm_layout(config).superposed);

  TrialOutcome out;
  gf2::BitMatrix system(width);
  ScriptOptions options;
  for (unsigned t = 0; t < samples; ++t) {
    const ScriptResult r = run_sparse(script, oracle, rng, options);
    const MeasurementRecord& m = r.measurements.front();
    out.measured_values.push_back(m.value);
    out.collapse_sizes.push_back(m.preimage_size);
    out.y_samples.push_back(r.samples.front());
    out.oracle_queries += r.oracle_applications;
    out.max_support = std::max(out.max_support, r.max_support);
    system.append_row(r.samples.front());
    if (config.mode == StatisticMode::kPerCoset && t == 0) options.forced_outcome = m.value;
  }

  const auto basis = gf2::nullspace_basis(system);
  out.nullspace_dim = static_cast<unsigned>(basis.size());
  out.x_bit = !basis.empty();
  out.witness = gf2::smallest_nonzero(basis);
  return out;
}

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

Verdict run_trials(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed) {
  config.validate();
  const unsigned q = config.resolved_q();
  const OracleView view(oracle);
  Verdict verdict;
  verdict.q = q;
  verdict.trials.reserve(q);
  for (unsigned t = 0; t < q; ++t) {
    const std::uint64_t seed = derive_seed(run_seed, {t});
    Rng rng(seed);
    TrialOutcome outcome = simon_trial(view, config, rng);
    outcome.index = t;
    outcome.seed = seed;
    (outcome.x_bit ? verdict.n1 : verdict.n0) += 1;
    verdict.oracle_queries += outcome.oracle_queries;
    verdict.trials.push_back(std::move(outcome));
  }
  return verdict;
}

void check_pairing(const OracleInstance& oracle, const AlgorithmConfig& config,
                   Algorithm expected, OracleKind scheme, const char* name) {
  require(config.algorithm == expected, std::string(name) + ": config names a different algorithm");
  require(oracle.kind() == scheme || oracle.kind() == OracleKind::kRandomPermutation,
          std::string(name) + ": oracle kind " + std::string(to_string(oracle.kind())) +
              " is not accepted");
  const BlockParams want = config.scheme_params();
  require(oracle.params().n == want.n && oracle.params().k == want.k,
          std::string(name) + ": oracle block shape does not match the config");
  if (oracle.kind() != OracleKind::kRandomPermutation) {
    require(oracle.params().d == want.d, std::string(name) + ": wrong round count");
  }
}

Verdict majority(Verdict v) {
  v.label = v.n1 > v.n0 ? Label::kRandom : Label::kScheme;
  return v;
}

}  // namespace

Verdict algorithm1(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed) {
  check_pairing(oracle, config, Algorithm::kAlg1, OracleKind::kVariantFeistel, "algorithm1");
  Verdict v = run_trials(oracle, config, run_seed);
  v.label = v.n1 == 0 ? Label::kScheme : Label::kRandom;
  return v;
}

Verdict algorithm2(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed) {
  check_pairing(oracle, config, Algorithm::kAlg2, OracleKind::kFeistel, "algorithm2");
  return majority(run_trials(oracle, config, run_seed));
}

Verdict algorithm3(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed) {
  check_pairing(oracle, config, Algorithm::kAlg3, OracleKind::kUnbalanced, "algorithm3");
  return majority(run_trials(oracle, config, run_seed));
}

Verdict algorithm_k_plus_1(const OracleInstance& oracle, const AlgorithmConfig& config,
                           std::uint64_t run_seed) {
  require(config.params.k >= 4, "algorithm_k_plus_1: k must be >= 4");
  check_pairing(oracle, config, Algorithm::kKPlus1, OracleKind::kUnbalanced,
                "algorithm_k_plus_1");
  return majority(run_trials(oracle, config, run_seed));
}

Verdict distinguish(const OracleInstance& oracle, const AlgorithmConfig& config,
                    std::uint64_t run_seed) {
  switch (config.algorithm) {
    case Algorithm::kAlg1: return algorithm1(oracle, config, run_seed);
    case Algorithm::kAlg2: return algorithm2(oracle, config, run_seed);
    case Algorithm::kAlg3: return algorithm3(oracle, config, run_seed);
    case Algorithm::kKPlus1: return algorithm_k_plus_1(oracle, config, run_seed);
  }
  throw ConfigError("unknown algorithm");
}

double CensusHistogram::mean_multiplicity() const {
  return nonempty_fibers == 0 ? 0.0
                              : static_cast<double>(domain) / static_cast<double>(nonempty_fibers);
}

double CensusHistogram::collapse_probability(std::size_t multiplicity) const {
  const auto it = fibers_by_multiplicity.find(multiplicity);
  if (it == fibers_by_multiplicity.end() || domain == 0) return 0.0;
  return static_cast<double>(multiplicity * it->second) / static_cast<double>(domain);
}

std::vector<Word> measured_statistic(const OracleView& oracle, const AlgorithmConfig& config) {
  const AlgorithmLayout roles = algorithm_layout(config);
  const RegisterLayout& layout = roles.layout;
  layout.check_register(roles.measured);
  if (layout.combined_width(roles.in_regs) != oracle.in_bits() ||
      layout.combined_width(roles.out_regs) != oracle.out_bits()) {
    throw ConfigError("census: oracle width does not match the algorithm layout");
  }
  const Word count = Word{1} << layout.width(roles.superposed);
  std::vector<Word> values(count);
  for (Word i = 0; i < count; ++i) {
    Word label = layout.replace(0, roles.superposed, i);
    label = layout.scatter_xor(label, roles.out_regs, oracle(layout.gather(label, roles.in_regs)));
    if (roles.xor_src) {
      const Word v = layout.extract(label, *roles.xor_src) ^ layout.extract(label, *roles.xor_dst);
      label = layout.replace(label, *roles.xor_dst, v);
    }
    values[i] = layout.extract(label, roles.measured);
  }
  return values;
}

CensusHistogram coset_census(const OracleView& oracle, const AlgorithmConfig& config) {
  const std::vector<Word> values = measured_statistic(oracle, config);
  std::unordered_map<Word, std::size_t> fibers;
  for (Word v : values) ++fibers[v];
  CensusHistogram h;
  h.domain = values.size();
  h.nonempty_fibers = fibers.size();
  for (const auto& [value, size] : fibers) ++h.fibers_by_multiplicity[size];
  return h;
}

}  // namespace flab
