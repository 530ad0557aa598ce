#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flab/distinguishers.hpp"
#include "flab/oracle.hpp"

namespace flab {

// Collision statistics queried over the full 2^n range of one sub-block:
//   kFs4: a ^ c over inputs (a, 0) of a 2n-bit oracle,
//   kG34: I2 ^ S1 over inputs (0, I2, 0) of a 3n-bit oracle,
//   kGk:  S1 over inputs (I1, 0, ..., 0) of a kn-bit oracle (I2 fixed at 0).
enum class Statistic { kFs4, kG34, kGk };

std::string_view to_string(Statistic statistic) noexcept;
Statistic statistic_for(Algorithm algorithm);

struct CollisionReport {
  Statistic statistic = Statistic::kFs4;
  unsigned n = 0;
  unsigned k = 2;
  std::uint64_t seed = 0;
  std::uint64_t m = 0;        // queries made
  std::uint64_t pairs = 0;    // N
  double expected_rp = 0.0;      // 2^{n-1}
  double expected_scheme = 0.0;  // 2^n
  double empirical_std = 0.0;    // filled in by batch aggregation
  double threshold = 0.0;
  Label verdict = Label::kScheme;
};

// sum over distinct values v of C(mult(v), 2).
std::uint64_t count_pairs_by_fibers(std::span<const Word> values);

CollisionReport count_pairs_fs4(const OracleInstance& oracle);
CollisionReport count_pairs_g34(const OracleInstance& oracle);
CollisionReport count_pairs_gk(const OracleInstance& oracle, unsigned k);

// SCHEME iff N >= 3 * 2^{n-2}, the midpoint of the two expectations.
// Records the threshold and verdict in the report.
Label classical_verdict(CollisionReport& report);

// CSV row: statistic,n,k,seed,m,N,expected_rp,expected_scheme,verdict
std::string csv_header();
std::string to_csv_row(const CollisionReport& report);

}  // namespace flab
