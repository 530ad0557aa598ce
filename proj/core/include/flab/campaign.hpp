#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flab/classical.hpp"
#include "flab/distinguishers.hpp"
#include "flab/stats.hpp"

namespace flab {

// Flat key=value configuration shared by the config file and CLI flags.
// Keys: alg, n, k, epsilon, q, trials, seed, measure-reg, mode, out, threads.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kAlg1;
  unsigned n = 4;
  unsigned k = 0;  // 0: 2 for alg1/alg2, 3 for alg3, 4 for gk
  std::optional<double> epsilon;
  std::optional<unsigned> q;
  unsigned trials = 100;  // oracle instances per class
  std::uint64_t seed = 1;
  unsigned measured_register = 0;  // 1-based; 0 = algorithm default
  StatisticMode mode = StatisticMode::kStacked;
  std::string out_dir;
  unsigned threads = 1;

  unsigned resolved_k() const;
  AlgorithmConfig algorithm_config() const;
  // ConfigError on bad values, CapacityError on oracle/table caps.
  void validate() const;

  void set(std::string_view key, std::string_view value);
  std::string to_text() const;
  static ExperimentConfig from_text(std::string_view text);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// FNV-1a over the canonical config text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

inline constexpr std::uint64_t kSchemeClassTag = 1;
inline constexpr std::uint64_t kRandomClassTag = 2;
// Seeds derive as mix(experiment_seed, class_tag, instance_index); the run
// seed adds one more tag.
std::uint64_t oracle_seed(std::uint64_t experiment_seed, Label truth, unsigned instance);
std::uint64_t run_seed(std::uint64_t experiment_seed, Label truth, unsigned instance);

struct RunRecord {
  Label truth = Label::kScheme;
  unsigned instance = 0;
  std::uint64_t oracle_seed = 0;
  std::uint64_t run_seed = 0;
  Verdict verdict;
};

struct ClassSummary {
  std::uint64_t runs = 0;
  std::uint64_t said_scheme = 0;
  std::uint64_t said_random = 0;
  std::uint64_t x_ones = 0;
  std::uint64_t x_total = 0;
  std::map<std::size_t, std::uint64_t> collapse_sizes;  // size -> count

  double x_rate() const;
  Interval x_rate_interval() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  unsigned q = 0;
  unsigned samples_per_trial = 0;
  unsigned measured_register = 0;
  ClassSummary scheme;  // truth = scheme
  ClassSummary random;  // truth = RP
  std::uint64_t total_runs = 0;
  std::uint64_t errors = 0;
  double empirical_error = 0.0;
  Interval error_interval;
  double advantage = 0.0;
  double error_bound = 0.0;
  std::uint64_t quantum_queries_per_trial = 0;
  std::uint64_t quantum_queries_per_run = 0;
  std::uint64_t classical_queries = 0;
  std::string config_hash;
  std::string generated_at;
  std::vector<RunRecord> runs;  // scheme runs first, then RP, by instance

  // Pretty JSON summary; the timestamp is the only field allowed to vary
  // between two runs of the same config.
  std::string to_json(bool include_timestamp = true) const;
  // One JSON object per trial.
  void write_trials_jsonl(std::ostream& out) const;
  static std::string summary_csv_header();
  std::string summary_csv_row() const;
};

ExperimentReport run_campaign(const ExperimentConfig& config);

enum class SweepAxis { kN, kQ, kEpsilon };
SweepAxis parse_sweep_axis(std::string_view text);

// Every value is validated before any campaign runs.
std::vector<ExperimentReport> sweep(const ExperimentConfig& config, SweepAxis axis,
                                    std::span<const double> values);

struct CensusRecord {
  Label truth = Label::kScheme;
  unsigned instance = 0;
  std::uint64_t oracle_seed = 0;
  CensusHistogram histogram;
};

std::vector<CensusRecord> run_census(const ExperimentConfig& config);
// truth,instance,seed,multiplicity,fibers
void write_census_csv(std::span<const CensusRecord> records, std::ostream& out);

struct ClassicalCampaign {
  std::vector<CollisionReport> scheme;
  std::vector<CollisionReport> random;
  double mean_scheme = 0.0;
  double mean_random = 0.0;
  double std_scheme = 0.0;
  double std_random = 0.0;
  double accuracy = 0.0;  // at the midpoint threshold
  std::uint64_t queries_per_instance = 0;
};

ClassicalCampaign run_classical(const ExperimentConfig& config);

}  // namespace flab
