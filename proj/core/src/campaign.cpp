#include "flab/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "flab/error.hpp"
#include "json.hpp"

namespace flab {

using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kRunTag = 0x72756e;  // "run"

std::uint64_t class_tag(Label truth) {
  return truth == Label::kScheme ? kSchemeClassTag : kRandomClassTag;
}

// Runs fn(0..count-1) on a small pool; results must be written by index so
// the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    const unsigned pool = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    for (unsigned w = 0; w < pool; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

OracleInstance build_for_class(const ExperimentConfig& config, Label truth, unsigned instance) {
  const AlgorithmConfig ac = config.algorithm_config();
  const std::uint64_t seed = oracle_seed(config.seed, truth, instance);
  if (truth == Label::kScheme) {
    return OracleInstance::build(ac.scheme_kind(), ac.scheme_params(), seed);
  }
  return OracleInstance::build(OracleKind::kRandomPermutation,
                               BlockParams{config.n, config.resolved_k(), 1}, seed);
}

std::string hex(Word v) {
  char buffer[24];
  std::snprintf(buffer, sizeof buffer, "%llx", static_cast<unsigned long long>(v));
  return buffer;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

void accumulate(ClassSummary& summary, const Verdict& verdict) {
  ++summary.runs;
  (verdict.label == Label::kScheme ? summary.said_scheme : summary.said_random) += 1;
  summary.x_ones += verdict.n1;
  summary.x_total += verdict.n0 + verdict.n1;
  for (const auto& trial : verdict.trials) {
    for (std::size_t size : trial.collapse_sizes) ++summary.collapse_sizes[size];
  }
}

ordered_json class_json(const ClassSummary& s) {
  ordered_json j;
  j["runs"] = s.runs;
  j["verdict_scheme"] = s.said_scheme;
  j["verdict_rp"] = s.said_random;
  j["x_rate"] = s.x_rate();
  const Interval ci = s.x_rate_interval();
  j["x_rate_wilson95"] = {ci.lower, ci.upper};
  ordered_json sizes = ordered_json::object();
  for (const auto& [size, count] : s.collapse_sizes) sizes[std::to_string(size)] = count;
  j["collapse_sizes"] = std::move(sizes);
  return j;
}

}  // namespace

std::uint64_t oracle_seed(std::uint64_t experiment_seed, Label truth, unsigned instance) {
  return derive_seed(experiment_seed, {class_tag(truth), instance});
}

std::uint64_t run_seed(std::uint64_t experiment_seed, Label truth, unsigned instance) {
  return derive_seed(experiment_seed, {class_tag(truth), instance, kRunTag});
}

double ClassSummary::x_rate() const {
  return x_total == 0 ? 0.0 : static_cast<double>(x_ones) / static_cast<double>(x_total);
}

Interval ClassSummary::x_rate_interval() const { return wilson_interval(x_ones, x_total); }

ExperimentReport run_campaign(const ExperimentConfig& config) {
  config.validate();
  const AlgorithmConfig ac = config.algorithm_config();

  ExperimentReport report;
  report.config = config;
  report.q = ac.resolved_q();
  report.samples_per_trial = ac.resolved_samples();
  report.measured_register = ac.resolved_measured_register();
  report.config_hash = config_hash(config);
  report.generated_at = utc_timestamp();

  const std::size_t jobs = std::size_t{2} * config.trials;
  report.runs.resize(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const Label truth = job < config.trials ? Label::kScheme : Label::kRandom;
    const auto instance = static_cast<unsigned>(job % config.trials);
    RunRecord& record = report.runs[job];
    record.truth = truth;
    record.instance = instance;
    record.oracle_seed = oracle_seed(config.seed, truth, instance);
    record.run_seed = run_seed(config.seed, truth, instance);
    const OracleInstance oracle = build_for_class(config, truth, instance);
    record.verdict = distinguish(oracle, ac, record.run_seed);
  });

  for (const auto& run : report.runs) {
    accumulate(run.truth == Label::kScheme ? report.scheme : report.random, run.verdict);
  }
  report.total_runs = report.scheme.runs + report.random.runs;
  report.errors = report.scheme.said_random + report.random.said_scheme;
  report.empirical_error =
      static_cast<double>(report.errors) / static_cast<double>(report.total_runs);
  report.error_interval = wilson_interval(report.errors, report.total_runs);
  report.advantage = std::abs(
      static_cast<double>(report.scheme.said_scheme) / static_cast<double>(report.scheme.runs) -
      static_cast<double>(report.random.said_scheme) / static_cast<double>(report.random.runs));
  report.error_bound = error_bound(config.algorithm, report.q);
  report.quantum_queries_per_trial = 2ULL * report.samples_per_trial;
  report.quantum_queries_per_run = report.quantum_queries_per_trial * report.q;
  report.classical_queries = Word{1} << config.n;
  return report;
}

std::string ExperimentReport::to_json(bool include_timestamp) const {
  ordered_json j;
  ordered_json cfg;
  cfg["alg"] = std::string(to_string(config.algorithm));
  cfg["n"] = config.n;
  cfg["k"] = config.resolved_k();
  if (config.epsilon) cfg["epsilon"] = *config.epsilon;
  cfg["q"] = q;
  cfg["trials"] = config.trials;
  cfg["seed"] = config.seed;
  cfg["measure_reg"] = measured_register;
  cfg["mode"] = std::string(to_string(config.mode));
  cfg["samples_per_trial"] = samples_per_trial;
  j["config"] = std::move(cfg);

  j["confusion"] = {
      {"truth_scheme", {{"verdict_scheme", scheme.said_scheme}, {"verdict_rp", scheme.said_random}}},
      {"truth_rp", {{"verdict_scheme", random.said_scheme}, {"verdict_rp", random.said_random}}}};
  j["total_runs"] = total_runs;
  j["empirical_error"] = empirical_error;
  j["empirical_error_wilson95"] = {error_interval.lower, error_interval.upper};
  j["claimed_error_bound"] = error_bound;
  j["advantage"] = advantage;
  j["classes"] = {{"scheme", class_json(scheme)}, {"rp", class_json(random)}};
  j["reference_x_rates"] = {1.0 / 3.0, 2.0 / 3.0};
  j["queries"] = {{"quantum_per_trial", quantum_queries_per_trial},
                  {"quantum_per_run", quantum_queries_per_run},
                  {"classical_per_instance", classical_queries}};

  std::uint64_t counted = 0;
  for (const auto& run : runs) counted += run.verdict.oracle_queries;
  j["queries"]["quantum_total_counted"] = counted;

  ordered_json meta;
  meta["prng"] = std::string(kPrngId);
  meta["config_hash"] = config_hash;
  meta["oracle_seed"] = "derive_seed(seed, {class_tag, instance}), scheme=1 rp=2";
  meta["run_seed"] = "derive_seed(seed, {class_tag, instance, 0x72756e})";
  meta["trial_seed"] = "derive_seed(run_seed, {trial})";
  if (include_timestamp) meta["generated_at"] = generated_at;
  j["metadata"] = std::move(meta);
  return j.dump(2);
}

void ExperimentReport::write_trials_jsonl(std::ostream& out) const {
  for (const auto& run : runs) {
    for (const auto& trial : run.verdict.trials) {
      ordered_json j;
      j["class"] = std::string(to_string(run.truth));
      j["instance"] = run.instance;
      j["oracle_seed"] = run.oracle_seed;
      j["trial"] = trial.index;
      j["trial_seed"] = trial.seed;
      ordered_json measured = ordered_json::array();
      for (Word v : trial.measured_values) measured.push_back(hex(v));
      j["measured_values"] = std::move(measured);
      j["collapse_sizes"] = trial.collapse_sizes;
      ordered_json ys = ordered_json::array();
      for (Word y : trial.y_samples) ys.push_back(hex(y));
      j["y"] = std::move(ys);
      j["nullspace_dim"] = trial.nullspace_dim;
      j["x_bit"] = trial.x_bit ? 1 : 0;
      j["queries"] = trial.oracle_queries;
      out << j.dump() << '\n';
    }
  }
}

std::string ExperimentReport::summary_csv_header() {
  return "alg,n,k,q,mode,measure_reg,trials,scheme_as_scheme,scheme_as_rp,rp_as_scheme,rp_as_rp,"
         "empirical_error,error_lo,error_hi,claimed_bound,x_rate_scheme,x_rate_rp,"
         "queries_per_trial,queries_per_run,classical_queries";
}

std::string ExperimentReport::summary_csv_row() const {
  std::ostringstream out;
  out.precision(10);
  out << to_string(config.algorithm) << ',' << config.n << ',' << config.resolved_k() << ',' << q
      << ',' << to_string(config.mode) << ',' << measured_register << ',' << config.trials << ','
      << scheme.said_scheme << ',' << scheme.said_random << ',' << random.said_scheme << ','
      << random.said_random << ',' << empirical_error << ',' << error_interval.lower << ','
      << error_interval.upper << ',' << error_bound << ',' << scheme.x_rate() << ','
      << random.x_rate() << ',' << quantum_queries_per_trial << ',' << quantum_queries_per_run
      << ',' << classical_queries;
  return out.str();
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "n") return SweepAxis::kN;
  if (text == "q") return SweepAxis::kQ;
  if (text == "epsilon") return SweepAxis::kEpsilon;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "' (n|q|epsilon)");
}

std::vector<ExperimentReport> sweep(const ExperimentConfig& config, SweepAxis axis,
                                    std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  std::vector<ExperimentConfig> configs;
  for (double v : values) {
    ExperimentConfig c = config;
    switch (axis) {
      case SweepAxis::kN:
      case SweepAxis::kQ: {
        if (v < 1.0 || v != std::floor(v)) {
          throw ConfigError("sweep: value " + std::to_string(v) + " is not a positive integer");
        }
        const auto u = static_cast<unsigned>(v);
        if (axis == SweepAxis::kN) {
          c.n = u;
        } else {
          c.q = u;
        }
        break;
      }
      case SweepAxis::kEpsilon:
        c.epsilon = v;
        c.q.reset();
        break;
    }
    c.validate();
    configs.push_back(std::move(c));
  }
  std::vector<ExperimentReport> reports;
  reports.reserve(configs.size());
  for (const auto& c : configs) reports.push_back(run_campaign(c));
  return reports;
}

std::vector<CensusRecord> run_census(const ExperimentConfig& config) {
  config.validate();
  const AlgorithmConfig ac = config.algorithm_config();
  const std::size_t jobs = std::size_t{2} * config.trials;
  std::vector<CensusRecord> records(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const Label truth = job < config.trials ? Label::kScheme : Label::kRandom;
    const auto instance = static_cast<unsigned>(job % config.trials);
    const OracleInstance oracle = build_for_class(config, truth, instance);
    records[job] = {truth, instance, oracle.seed(), coset_census(OracleView(oracle), ac)};
  });
  return records;
}

void write_census_csv(std::span<const CensusRecord> records, std::ostream& out) {
  out << "class,instance,seed,multiplicity,fibers\n";
  for (const auto& r : records) {
    for (const auto& [mult, fibers] : r.histogram.fibers_by_multiplicity) {
      out << to_string(r.truth) << ',' << r.instance << ',' << r.oracle_seed << ',' << mult << ','
          << fibers << '\n';
    }
  }
}

ClassicalCampaign run_classical(const ExperimentConfig& config) {
  config.validate();
  const Statistic statistic = statistic_for(config.algorithm);
  const unsigned k = config.resolved_k();
  const std::size_t jobs = std::size_t{2} * config.trials;
  std::vector<CollisionReport> reports(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const Label truth = job < config.trials ? Label::kScheme : Label::kRandom;
    const auto instance = static_cast<unsigned>(job % config.trials);
    const OracleInstance oracle = build_for_class(config, truth, instance);
    switch (statistic) {
      case Statistic::kFs4: reports[job] = count_pairs_fs4(oracle); break;
      case Statistic::kG34: reports[job] = count_pairs_g34(oracle); break;
      case Statistic::kGk: reports[job] = count_pairs_gk(oracle, k); break;
    }
  });

  ClassicalCampaign out;
  out.scheme.assign(reports.begin(), reports.begin() + config.trials);
  out.random.assign(reports.begin() + config.trials, reports.end());
  auto pairs_of = [](const std::vector<CollisionReport>& rs) {
    std::vector<double> v;
    for (const auto& r : rs) v.push_back(static_cast<double>(r.pairs));
    return v;
  };
  const auto scheme_n = pairs_of(out.scheme);
  const auto random_n = pairs_of(out.random);
  out.mean_scheme = mean(scheme_n);
  out.mean_random = mean(random_n);
  out.std_scheme = sample_stddev(scheme_n);
  out.std_random = sample_stddev(random_n);
  for (auto& r : out.scheme) r.empirical_std = out.std_scheme;
  for (auto& r : out.random) r.empirical_std = out.std_random;

  std::size_t correct = 0;
  for (const auto& r : out.scheme) correct += r.verdict == Label::kScheme ? 1 : 0;
  for (const auto& r : out.random) correct += r.verdict == Label::kRandom ? 1 : 0;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(jobs);
  out.queries_per_instance = Word{1} << config.n;
  return out;
}

}  // namespace flab
