#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace flab::gf2 {

// Row vector over GF(2); column j is bit j.
using Row = std::uint64_t;

inline constexpr unsigned kMaxColumns = 64;

constexpr unsigned dot(Row a, Row b) noexcept {
  return static_cast<unsigned>(__builtin_parityll(a & b));
}

// Row-major matrix with one packed word per row.
class BitMatrix {
 public:
  explicit BitMatrix(unsigned cols);
  BitMatrix(unsigned cols, std::vector<Row> rows);

  unsigned cols() const noexcept { return cols_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  Row row(std::size_t i) const { return rows_.at(i); }
  std::span<const Row> row_data() const noexcept { return rows_; }

  void append_row(Row y);

  // M x over GF(2), packed as one bit per row (row i -> bit i); rows <= 64.
  Row multiply(Row x) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  unsigned cols_;
  std::vector<Row> rows_;
};

std::size_t rank(const BitMatrix& m);

// Basis of {x : M x = 0}, one vector per free column of the reduced
// row-echelon form, in increasing free-column order. Empty means {0}.
std::vector<Row> nullspace_basis(const BitMatrix& m);

// Smallest nonzero element (as an unsigned integer) of span(basis).
std::optional<Row> smallest_nonzero(std::span<const Row> basis);

}  // namespace flab::gf2
