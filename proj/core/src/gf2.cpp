#include "flab/gf2.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "flab/error.hpp"

namespace flab::gf2 {

namespace {

struct Echelon {
  std::vector<Row> rows;          // reduced rows, one per pivot
  std::vector<unsigned> pivots;   // pivot column of each row
};

// Gauss-Jordan elimination, scanning columns left to right and taking the
// first remaining row that has the column set.
Echelon reduce(const BitMatrix& m) {
  std::vector<Row> work(m.row_data().begin(), m.row_data().end());
  Echelon e;
  std::size_t next = 0;
  for (unsigned col = 0; col < m.cols() && next < work.size(); ++col) {
    const Row bit = Row{1} << col;
    auto it = std::find_if(work.begin() + static_cast<std::ptrdiff_t>(next), work.end(),
                           [bit](Row r) { return (r & bit) != 0; });
    if (it == work.end()) continue;
    std::iter_swap(work.begin() + static_cast<std::ptrdiff_t>(next), it);
    const Row pivot = work[next];
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i != next && (work[i] & bit)) work[i] ^= pivot;
    }
    e.pivots.push_back(col);
    ++next;
  }
  e.rows.assign(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(next));
  return e;
}

Row column_mask(unsigned cols) {
  return cols >= 64 ? ~Row{0} : (Row{1} << cols) - 1;
}

}  // namespace

BitMatrix::BitMatrix(unsigned cols) : cols_(cols) {
  if (cols_ == 0 || cols_ > kMaxColumns) {
    throw ConfigError("BitMatrix: column count must be in [1, 64], got " + std::to_string(cols));
  }
}

BitMatrix::BitMatrix(unsigned cols, std::vector<Row> rows) : BitMatrix(cols) {
  for (Row r : rows) append_row(r);
}

void BitMatrix::append_row(Row y) {
  if ((y & ~column_mask(cols_)) != 0) throw ConfigError("BitMatrix: row wider than column count");
  rows_.push_back(y);
}

Row BitMatrix::multiply(Row x) const {
  if (rows_.size() > 64) throw ConfigError("BitMatrix::multiply: more than 64 rows");
  Row out = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) out |= Row{dot(rows_[i], x)} << i;
  return out;
}

std::size_t rank(const BitMatrix& m) { return reduce(m).pivots.size(); }

std::vector<Row> nullspace_basis(const BitMatrix& m) {
  const Echelon e = reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (unsigned p : e.pivots) is_pivot[p] = true;

  std::vector<Row> basis;
  for (unsigned free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Row x = Row{1} << free;
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
      if (e.rows[r] & (Row{1} << free)) x |= Row{1} << e.pivots[r];
    }
    basis.push_back(x);
  }
  return basis;
}

std::optional<Row> smallest_nonzero(std::span<const Row> basis) {
  // Reduce so every vector has a distinct leading (highest) bit that no other
  // vector contains; the minimum is then the vector with the lowest leader.
  std::vector<Row> reduced;
  for (Row v : basis) {
    for (Row r : reduced) {
      const Row lead = std::bit_floor(r);
      if (v & lead) v ^= r;
    }
    if (v == 0) continue;
    const Row lead = std::bit_floor(v);
    for (Row& r : reduced) {
      if (r & lead) r ^= v;
    }
    reduced.push_back(v);
  }
  if (reduced.empty()) return std::nullopt;
  return *std::min_element(reduced.begin(), reduced.end());
}

}  // namespace flab::gf2
