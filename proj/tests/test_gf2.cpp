#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "flab/error.hpp"
#include "flab/gf2.hpp"
#include "flab/rng.hpp"

namespace flab::gf2 {
namespace {

std::vector<Row> brute_nullspace(const BitMatrix& m) {
  std::vector<Row> out;
  for (Row x = 0; x < (Row{1} << m.cols()); ++x) {
    if (m.multiply(x) == 0) out.push_back(x);
  }
  return out;
}

std::vector<Row> span_of(const std::vector<Row>& basis) {
  std::vector<Row> out;
  for (Row mask = 0; mask < (Row{1} << basis.size()); ++mask) {
    Row v = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if ((mask >> i) & 1) v ^= basis[i];
    }
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TEST(Gf2, FullRankSquareHasTrivialNullspace) {
  const BitMatrix m(2, {0b01, 0b11});
  EXPECT_EQ(rank(m), 2u);
  EXPECT_TRUE(nullspace_basis(m).empty());
  EXPECT_FALSE(smallest_nonzero({}).has_value());
}

TEST(Gf2, SamplesOrthogonalToPeriod) {
  // Rows all satisfy y . 0b101 = 0.
  const BitMatrix m(3, {0b010, 0b101, 0b111, 0b000});
  EXPECT_EQ(rank(m), 2u);
  const auto basis = nullspace_basis(m);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], Row{0b101});
  EXPECT_EQ(smallest_nonzero(basis), Row{0b101});
}

TEST(Gf2, EmptyAndZeroMatrices) {
  const BitMatrix empty(4);
  EXPECT_EQ(rank(empty), 0u);
  EXPECT_EQ(nullspace_basis(empty).size(), 4u);
  EXPECT_EQ(smallest_nonzero(nullspace_basis(empty)), Row{1});
  const BitMatrix zeros(4, {0, 0, 0});
  EXPECT_EQ(nullspace_basis(zeros).size(), 4u);
}

TEST(Gf2, RejectsBadShapes) {
  EXPECT_THROW(BitMatrix(0), ConfigError);
  EXPECT_THROW(BitMatrix(65), ConfigError);
  BitMatrix m(3);
  EXPECT_THROW(m.append_row(0b1000), ConfigError);
}

TEST(Gf2, SmallestNonzeroOfSpan) {
  const std::vector<Row> basis{0b1100, 0b1010};
  EXPECT_EQ(smallest_nonzero(basis), Row{0b0110});
  const std::vector<Row> dependent{0b111, 0b111, 0b100};
  EXPECT_EQ(smallest_nonzero(dependent), Row{0b011});
}

TEST(Gf2, MatchesBruteForceOnRandomMatrices) {
  Rng rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned cols = 1 + static_cast<unsigned>(rng.uniform_below(10));
    const std::size_t rows = rng.uniform_below(14);
    BitMatrix m(cols);
    for (std::size_t r = 0; r < rows; ++r) {
      // Bias toward low-rank systems so nontrivial nullspaces are common.
      Row y = rng.bits(cols);
      if (trial % 3 == 0) y &= rng.bits(cols);
      m.append_row(y);
    }
    const auto basis = nullspace_basis(m);
    const auto brute = brute_nullspace(m);
    EXPECT_EQ(rank(m) + basis.size(), cols);
    EXPECT_EQ(brute.size(), std::size_t{1} << basis.size());
    for (Row b : basis) {
      EXPECT_NE(b, 0u);
      EXPECT_EQ(m.multiply(b), 0u);
    }
    EXPECT_EQ(span_of(basis), brute);
    const auto smallest = smallest_nonzero(basis);
    if (brute.size() > 1) {
      ASSERT_TRUE(smallest.has_value());
      EXPECT_EQ(*smallest, brute[1]);
    } else {
      EXPECT_FALSE(smallest.has_value());
    }
  }
}

TEST(Gf2, SixtyFourColumns) {
  BitMatrix m(64);
  Rng rng(7);
  const Row s = rng.next() | 1;
  while (m.rows() < 200) {
    const Row y = rng.next();
    if (dot(y, s) == 0) m.append_row(y);
  }
  const auto basis = nullspace_basis(m);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], s);
}

}  // namespace
}  // namespace flab::gf2
