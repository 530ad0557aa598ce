#include "flab/classical.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "flab/error.hpp"

namespace flab {

std::string_view to_string(Statistic statistic) noexcept {
  switch (statistic) {
    case Statistic::kFs4: return "fs4";
    case Statistic::kG34: return "g34";
    case Statistic::kGk: return "gk";
  }
  return "?";
}

Statistic statistic_for(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAlg2: return Statistic::kFs4;
    case Algorithm::kAlg3: return Statistic::kG34;
    case Algorithm::kKPlus1: return Statistic::kGk;
    case Algorithm::kAlg1: break;
  }
  throw ConfigError("no classical collision statistic is defined for alg1");
}

std::uint64_t count_pairs_by_fibers(std::span<const Word> values) {
  std::unordered_map<Word, std::uint64_t> fibers;
  fibers.reserve(values.size());
  for (Word v : values) ++fibers[v];
  std::uint64_t pairs = 0;
  for (const auto& [value, mult] : fibers) pairs += mult * (mult - 1) / 2;
  return pairs;
}

namespace {

CollisionReport make_report(Statistic statistic, const OracleInstance& oracle,
                            std::span<const Word> values) {
  CollisionReport r;
  r.statistic = statistic;
  r.n = oracle.params().n;
  r.k = oracle.params().k;
  r.seed = oracle.seed();
  r.m = values.size();
  r.pairs = count_pairs_by_fibers(values);
  r.expected_rp = std::ldexp(1.0, static_cast<int>(r.n) - 1);
  r.expected_scheme = std::ldexp(1.0, static_cast<int>(r.n));
  classical_verdict(r);
  return r;
}

void require_shape(const OracleInstance& oracle, unsigned k, const char* name) {
  if (oracle.params().k != k) {
    throw ConfigError(std::string(name) + ": expected a " + std::to_string(k) +
                      "-sub-block oracle, got k = " + std::to_string(oracle.params().k));
  }
}

}  // namespace

CollisionReport count_pairs_fs4(const OracleInstance& oracle) {
  require_shape(oracle, 2, "count_pairs_fs4");
  const unsigned n = oracle.params().n;
  std::vector<Word> values(Word{1} << n);
  for (Word a = 0; a < values.size(); ++a) {
    const Word c = oracle.evaluate(a << n) >> n;
    values[a] = a ^ c;
  }
  return make_report(Statistic::kFs4, oracle, values);
}

CollisionReport count_pairs_g34(const OracleInstance& oracle) {
  require_shape(oracle, 3, "count_pairs_g34");
  const unsigned n = oracle.params().n;
  std::vector<Word> values(Word{1} << n);
  for (Word i2 = 0; i2 < values.size(); ++i2) {
    const Word s1 = oracle.evaluate(i2 << n) >> (2 * n);
    values[i2] = i2 ^ s1;
  }
  return make_report(Statistic::kG34, oracle, values);
}

CollisionReport count_pairs_gk(const OracleInstance& oracle, unsigned k) {
  if (k < 4) throw ConfigError("count_pairs_gk: k must be >= 4");
  require_shape(oracle, k, "count_pairs_gk");
  const unsigned n = oracle.params().n;
  const unsigned rest = (k - 1) * n;
  std::vector<Word> values(Word{1} << n);
  for (Word i1 = 0; i1 < values.size(); ++i1) {
    values[i1] = oracle.evaluate(i1 << rest) >> rest;
  }
  return make_report(Statistic::kGk, oracle, values);
}

Label classical_verdict(CollisionReport& report) {
  report.threshold = 3.0 * std::ldexp(1.0, static_cast<int>(report.n) - 2);
  report.verdict = static_cast<double>(report.pairs) >= report.threshold ? Label::kScheme
                                                                          : Label::kRandom;
  return report.verdict;
}

std::string csv_header() {
  return "statistic,n,k,seed,m,N,expected_rp,expected_scheme,verdict";
}

std::string to_csv_row(const CollisionReport& r) {
  std::ostringstream out;
  out << to_string(r.statistic) << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << r.m << ','
      << r.pairs << ',' << r.expected_rp << ',' << r.expected_scheme << ','
      << to_string(r.verdict);
  return out.str();
}

}  // namespace flab
