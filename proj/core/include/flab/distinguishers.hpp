#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "flab/oracle.hpp"
#include "flab/qsim.hpp"
#include "flab/rng.hpp"

namespace flab {

enum class Algorithm {
  kAlg1,    // VFS vs RP
  kAlg2,    // FS^4 vs RP
  kAlg3,    // G_3^4 vs RP
  kKPlus1,  // G_k^{k+1} vs RP, k >= 4
};

// kStacked: every inner iteration collapses independently and the n+5
// samples from different fibers are stacked into one system.
// kPerCoset: the first iteration's outcome is post-selected in every later
// iteration, so all samples of a trial come from one coset state.
enum class StatisticMode { kStacked, kPerCoset };

enum class Label { kScheme, kRandom };

std::string_view to_string(Algorithm algorithm) noexcept;
std::string_view to_string(StatisticMode mode) noexcept;
std::string_view to_string(Label label) noexcept;
Algorithm parse_algorithm(std::string_view text);
StatisticMode parse_statistic_mode(std::string_view text);

struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::kAlg1;
  // n, and k for kKPlus1. k and d are fixed by the algorithm otherwise.
  BlockParams params{};
  std::optional<double> epsilon;
  std::optional<unsigned> q;  // overrides epsilon when set
  unsigned samples_per_trial = 0;  // 0 means n + 5
  // 1-based, matching the register numbering of the attack descriptions;
  // 0 selects the default (4, 3, 4, k+1).
  unsigned measured_register = 0;
  StatisticMode mode = StatisticMode::kStacked;

  unsigned resolved_q() const;
  unsigned resolved_samples() const;
  unsigned resolved_measured_register() const;
  // Scheme-side oracle parameters: (n,2,3), (n,2,4), (n,3,4) or (n,k,k+1).
  BlockParams scheme_params() const;
  OracleKind scheme_kind() const;
  void validate() const;
};

unsigned query_budget(Algorithm algorithm, double epsilon);
double error_bound(Algorithm algorithm, unsigned q);

// Register roles (0-based) for one inner iteration of an algorithm.
struct AlgorithmLayout {
  RegisterLayout layout;
  std::size_t superposed;
  std::vector<std::size_t> in_regs;
  std::vector<std::size_t> out_regs;
  std::optional<std::size_t> xor_src;  // U_D: dst <- dst ^ src
  std::optional<std::size_t> xor_dst;
  std::size_t measured;
};

AlgorithmLayout algorithm_layout(const AlgorithmConfig& config);

// prepare, U_C, [U_D], measure, [U_D], U_C, H, sample.
Script iteration_script(const AlgorithmConfig& config);

struct TrialOutcome {
  unsigned index = 0;
  std::uint64_t seed = 0;
  std::vector<Word> measured_values;
  std::vector<std::size_t> collapse_sizes;
  std::vector<Word> y_samples;
  unsigned nullspace_dim = 0;
  bool x_bit = false;
  std::optional<Word> witness;  // smallest nonzero nullspace vector
  std::uint64_t oracle_queries = 0;
  std::size_t max_support = 0;
};

// One pass of the outer loop: n+5 inner iterations, then Gaussian
// elimination on the stacked samples.
TrialOutcome simon_trial(const OracleView& oracle, const AlgorithmConfig& config, Rng& rng);

struct Verdict {
  Label label = Label::kScheme;
  unsigned q = 0;
  unsigned n0 = 0;
  unsigned n1 = 0;
  std::uint64_t oracle_queries = 0;
  std::vector<TrialOutcome> trials;
};

// Trial t runs on Rng(derive_seed(run_seed, {t})), so any single trial can be
// replayed in isolation.
Verdict algorithm1(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed);
Verdict algorithm2(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed);
Verdict algorithm3(const OracleInstance& oracle, const AlgorithmConfig& config,
                   std::uint64_t run_seed);
Verdict algorithm_k_plus_1(const OracleInstance& oracle, const AlgorithmConfig& config,
                           std::uint64_t run_seed);
// Dispatches on config.algorithm.
Verdict distinguish(const OracleInstance& oracle, const AlgorithmConfig& config,
                    std::uint64_t run_seed);

// Classical fiber census of the measured statistic over the superposed
// register's full range.
struct CensusHistogram {
  std::map<std::size_t, std::size_t> fibers_by_multiplicity;
  std::size_t domain = 0;
  std::size_t nonempty_fibers = 0;
  // domain / nonempty_fibers.
  double mean_multiplicity() const;
  // Probability that a measurement collapses onto a fiber of size m:
  // m * #fibers(m) / domain.
  double collapse_probability(std::size_t multiplicity) const;
};

// Value of the measured register for every superposed input, computed
// classically by pushing basis labels through U_C and U_D.
std::vector<Word> measured_statistic(const OracleView& oracle, const AlgorithmConfig& config);
CensusHistogram coset_census(const OracleView& oracle, const AlgorithmConfig& config);

}  // namespace flab
