#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>

#include "flab/campaign.hpp"
#include "flab/error.hpp"

namespace flab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: '" + std::string(key) + "' expects an unsigned integer, got '" +
                      std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  // Accept "p/q" as well as plain decimals, e.g. epsilon=1/27.
  if (const auto slash = value.find('/'); slash != std::string_view::npos) {
    const double num = parse_real(key, trim(value.substr(0, slash)));
    const double den = parse_real(key, trim(value.substr(slash + 1)));
    if (den == 0.0) throw ConfigError("config: '" + std::string(key) + "' divides by zero");
    return num / den;
  }
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" +
                      std::string(value) + "'");
  }
  return out;
}

std::string format_real(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

unsigned ExperimentConfig::resolved_k() const {
  if (k != 0) return k;
  switch (algorithm) {
    case Algorithm::kAlg1:
    case Algorithm::kAlg2: return 2;
    case Algorithm::kAlg3: return 3;
    case Algorithm::kKPlus1: return 4;
  }
  return 2;
}

AlgorithmConfig ExperimentConfig::algorithm_config() const {
  AlgorithmConfig c;
  c.algorithm = algorithm;
  c.params = BlockParams{n, resolved_k(), 1};
  c.epsilon = epsilon;
  c.q = q;
  c.measured_register = measured_register;
  c.mode = mode;
  return c;
}

void ExperimentConfig::validate() const {
  if (trials == 0) throw ConfigError("config: trials must be >= 1");
  if (threads == 0) throw ConfigError("config: threads must be >= 1");
  if (!epsilon && !q) throw ConfigError("config: give epsilon or q");
  const unsigned kk = resolved_k();
  if ((algorithm == Algorithm::kAlg1 || algorithm == Algorithm::kAlg2) && kk != 2) {
    throw ConfigError("config: alg1 and alg2 act on balanced blocks (k = 2)");
  }
  if (algorithm == Algorithm::kAlg3 && kk != 3) throw ConfigError("config: alg3 requires k = 3");
  const AlgorithmConfig ac = algorithm_config();
  ac.validate();
  // The RP class tabulates the whole k*n-bit block.
  BlockParams rp{n, kk, 1};
  rp.validate();
  if (rp.block_bits() > kMaxPermutationBits) {
    throw CapacityError("random permutation on " + std::to_string(rp.block_bits()) +
                        " bits exceeds the desk-scale cap of " +
                        std::to_string(kMaxPermutationBits) + " bits");
  }
}

void ExperimentConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "alg") {
    algorithm = parse_algorithm(value);
  } else if (key == "n") {
    n = parse_integer<unsigned>(key, value);
  } else if (key == "k") {
    k = parse_integer<unsigned>(key, value);
  } else if (key == "epsilon") {
    epsilon = parse_real(key, value);
  } else if (key == "q") {
    q = parse_integer<unsigned>(key, value);
  } else if (key == "trials") {
    trials = parse_integer<unsigned>(key, value);
  } else if (key == "seed") {
    seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "measure-reg") {
    measured_register = parse_integer<unsigned>(key, value);
  } else if (key == "mode") {
    mode = parse_statistic_mode(value);
  } else if (key == "out") {
    out_dir = std::string(value);
  } else if (key == "threads") {
    threads = parse_integer<unsigned>(key, value);
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "alg=" << to_string(algorithm) << '\n';
  out << "n=" << n << '\n';
  out << "k=" << k << '\n';
  if (epsilon) out << "epsilon=" << format_real(*epsilon) << '\n';
  if (q) out << "q=" << *q << '\n';
  out << "trials=" << trials << '\n';
  out << "seed=" << seed << '\n';
  out << "measure-reg=" << measured_register << '\n';
  out << "mode=" << to_string(mode) << '\n';
  out << "out=" << out_dir << '\n';
  out << "threads=" << threads << '\n';
  return out.str();
}

ExperimentConfig ExperimentConfig::from_text(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  // Execution-only keys (out, threads) do not change results.
  ExperimentConfig canonical = config;
  canonical.out_dir.clear();
  canonical.threads = 1;
  for (unsigned char c : canonical.to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace flab
