// flab: oracle generation, distinguisher campaigns, sweeps and censuses.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flab/campaign.hpp"
#include "flab/error.hpp"

namespace fs = std::filesystem;

namespace {

struct ExperimentFlags {
  std::string config_file;
  std::string alg, n, k, epsilon, q, trials, seed, measure_reg, mode, out, threads;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "key=value config file; flags override it");
    app.add_option("--alg", alg, "alg1|alg2|alg3|gk");
    app.add_option("--n", n, "bits per sub-block");
    app.add_option("--k", k, "sub-blocks (gk only; k >= 4)");
    app.add_option("--epsilon", epsilon, "target error, decimal or p/q");
    app.add_option("--q", q, "outer trials; overrides --epsilon");
    app.add_option("--trials", trials, "oracle instances per class");
    app.add_option("--seed", seed, "experiment seed");
    app.add_option("--measure-reg", measure_reg, "measured register, 1-based");
    app.add_option("--mode", mode, "stacked|per-coset");
    app.add_option("--out", out, "output directory");
    app.add_option("--threads", threads, "worker threads");
  }

  flab::ExperimentConfig resolve(const CLI::App& app) const {
    flab::ExperimentConfig config;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw flab::ConfigError("cannot read config file '" + config_file + "'");
      std::ostringstream text;
      text << in.rdbuf();
      config = flab::ExperimentConfig::from_text(text.str());
    }
    const std::pair<const char*, const std::string*> flags[] = {
        {"alg", &alg},         {"n", &n},
        {"k", &k},             {"epsilon", &epsilon},
        {"q", &q},             {"trials", &trials},
        {"seed", &seed},       {"measure-reg", &measure_reg},
        {"mode", &mode},       {"out", &out},
        {"threads", &threads}};
    for (const auto& [key, value] : flags) {
      if (app.count(std::string("--") + key) > 0) config.set(key, *value);
    }
    // An explicit --epsilon on the command line beats a q from the file.
    if (app.count("--epsilon") > 0 && app.count("--q") == 0) config.q.reset();
    config.validate();
    return config;
  }
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw flab::ConfigError("cannot write '" + path.string() + "'");
  return out;
}

fs::path output_dir(const flab::ExperimentConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

void print_report(const flab::ExperimentReport& r, std::ostream& out) {
  out << flab::to_string(r.config.algorithm) << " n=" << r.config.n << " k=" << r.config.resolved_k()
      << " q=" << r.q << " mode=" << flab::to_string(r.config.mode)
      << " measure-reg=" << r.measured_register << '\n';
  out << "             verdict SCHEME  verdict RP\n";
  out << "truth SCHEME " << r.scheme.said_scheme << "  " << r.scheme.said_random << '\n';
  out << "truth RP     " << r.random.said_scheme << "  " << r.random.said_random << '\n';
  out << "error " << r.empirical_error << " [" << r.error_interval.lower << ", "
      << r.error_interval.upper << "]  claimed bound " << r.error_bound << '\n';
  out << "x rate scheme " << r.scheme.x_rate() << "  rp " << r.random.x_rate() << '\n';
  out << "queries per trial " << r.quantum_queries_per_trial << "  per run "
      << r.quantum_queries_per_run << "  classical " << r.classical_queries << '\n';
}

void write_report(const flab::ExperimentReport& r, const fs::path& dir, const std::string& stem) {
  open_output(dir / (stem + ".json")) << r.to_json() << '\n';
  auto trials = open_output(dir / (stem == "report" ? "trials.jsonl" : stem + "_trials.jsonl"));
  r.write_trials_jsonl(trials);
}

int cmd_gen_oracle(const std::string& kind, unsigned n, unsigned k, unsigned d, std::uint64_t seed,
                   bool tables, const std::string& out) {
  const auto oracle = flab::OracleInstance::build(flab::parse_oracle_kind(kind), {n, k, d}, seed);
  const std::string json = flab::oracle_to_json(oracle, tables);
  if (out.empty()) {
    std::cout << json << '\n';
  } else {
    fs::create_directories(out);
    open_output(fs::path(out) / "oracle.json") << json << '\n';
  }
  return 0;
}

int cmd_run(const flab::ExperimentConfig& config) {
  const auto report = flab::run_campaign(config);
  print_report(report, std::cout);
  if (!config.out_dir.empty()) {
    const fs::path dir = output_dir(config);
    write_report(report, dir, "report");
    auto csv = open_output(dir / "summary.csv");
    csv << flab::ExperimentReport::summary_csv_header() << '\n' << report.summary_csv_row() << '\n';
    open_output(dir / "config.txt") << config.to_text();
  }
  return 0;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    flab::ExperimentConfig scratch;
    scratch.set("epsilon", token);
    values.push_back(*scratch.epsilon);
  }
  return values;
}

int cmd_sweep(const flab::ExperimentConfig& config, const std::string& axis,
              const std::string& values) {
  const auto reports = flab::sweep(config, flab::parse_sweep_axis(axis), parse_values(values));
  std::ostringstream csv;
  csv << flab::ExperimentReport::summary_csv_header() << '\n';
  for (const auto& r : reports) csv << r.summary_csv_row() << '\n';
  std::cout << csv.str();
  if (!config.out_dir.empty()) {
    const fs::path dir = output_dir(config);
    open_output(dir / "sweep.csv") << csv.str();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      write_report(reports[i], dir, "report_" + std::to_string(i));
    }
  }
  return 0;
}

int cmd_census(const flab::ExperimentConfig& config) {
  const auto records = flab::run_census(config);
  if (config.out_dir.empty()) {
    flab::write_census_csv(records, std::cout);
  } else {
    auto out = open_output(output_dir(config) / "census.csv");
    flab::write_census_csv(records, out);
  }
  for (const auto truth : {flab::Label::kScheme, flab::Label::kRandom}) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& r : records) {
      if (r.truth != truth) continue;
      total += r.histogram.mean_multiplicity();
      ++count;
    }
    std::cerr << flab::to_string(truth) << " mean fiber size " << total / double(count) << '\n';
  }
  return 0;
}

int cmd_classical(const flab::ExperimentConfig& config) {
  const auto result = flab::run_classical(config);
  std::ostringstream csv;
  csv << flab::csv_header() << '\n';
  for (const auto* group : {&result.scheme, &result.random}) {
    for (const auto& r : *group) csv << flab::to_csv_row(r) << '\n';
  }
  if (config.out_dir.empty()) {
    std::cout << csv.str();
  } else {
    open_output(output_dir(config) / "classical.csv") << csv.str();
  }
  std::cerr << "mean N scheme " << result.mean_scheme << " (sd " << result.std_scheme << ")  rp "
            << result.mean_random << " (sd " << result.std_random << ")  accuracy "
            << result.accuracy << "  queries " << result.queries_per_instance << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum distinguishers for Feistel constructions, simulated at desk scale"};
  app.require_subcommand(1);

  std::string kind = "FS_r", oracle_out;
  unsigned on = 4, ok = 2, od = 4;
  std::uint64_t oseed = 1;
  bool tables = false;
  auto* gen = app.add_subcommand("gen-oracle", "build one oracle instance and dump it as JSON");
  gen->add_option("--kind", kind, "FS_r|VFS|G_k_d|RP");
  gen->add_option("--n", on, "bits per sub-block");
  gen->add_option("--k", ok, "sub-blocks");
  gen->add_option("--d", od, "rounds");
  gen->add_option("--seed", oseed, "oracle seed");
  gen->add_flag("--tables", tables, "include the round tables");
  gen->add_option("--out", oracle_out, "output directory");

  ExperimentFlags run_flags, sweep_flags, census_flags, classical_flags;
  auto* run = app.add_subcommand("run", "distinguisher campaign over both oracle classes");
  run_flags.attach(*run);
  auto* sw = app.add_subcommand("sweep", "one campaign per value of n, q or epsilon");
  sweep_flags.attach(*sw);
  std::string axis, values;
  sw->add_option("--axis", axis, "n|q|epsilon")->required();
  sw->add_option("--values", values, "comma-separated values")->required();
  auto* census = app.add_subcommand("census", "fiber-size histograms of the measured register");
  census_flags.attach(*census);
  auto* classical = app.add_subcommand("classical", "classical collision-count baseline");
  classical_flags.attach(*classical);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen_oracle(kind, on, ok, od, oseed, tables, oracle_out);
    if (*run) return cmd_run(run_flags.resolve(*run));
    if (*sw) return cmd_sweep(sweep_flags.resolve(*sw), axis, values);
    if (*census) return cmd_census(census_flags.resolve(*census));
    if (*classical) return cmd_classical(classical_flags.resolve(*classical));
  } catch (const flab::CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const flab::ConfigError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
