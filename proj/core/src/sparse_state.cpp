#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>

#include "flab/error.hpp"
#include "flab/qsim.hpp"

namespace flab {

namespace {

void check_oracle_widths(const RegisterLayout& layout, const OracleView& oracle,
                         std::span<const std::size_t> in_regs,
                         std::span<const std::size_t> out_regs) {
  if (layout.combined_width(in_regs) != oracle.in_bits() ||
      layout.combined_width(out_regs) != oracle.out_bits()) {
    throw ConfigError("apply_oracle_xor: register widths do not match the oracle");
  }
  for (std::size_t a : in_regs) {
    for (std::size_t b : out_regs) {
      if (a == b) throw ConfigError("apply_oracle_xor: input and output registers overlap");
    }
  }
}

// In-place unnormalized Walsh-Hadamard butterfly.
void walsh_hadamard(std::vector<Amplitude>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Amplitude x = v[j];
        const Amplitude y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
    }
  }
}

template <class Marginal>
Word draw(const Marginal& marginal, Rng& rng) {
  double total = 0.0;
  for (const auto& [value, p] : marginal) total += p;
  const double u = rng.uniform01() * total;
  double cumulative = 0.0;
  for (const auto& [value, p] : marginal) {
    cumulative += p;
    if (u < cumulative) return value;
  }
  return marginal.back().first;
}

}  // namespace

SparseState SparseState::uniform(const RegisterLayout& layout, std::size_t superposed) {
  layout.check_register(superposed);
  const unsigned w = layout.width(superposed);
  const std::size_t count = std::size_t{1} << w;
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  std::vector<Entry> entries;
  entries.reserve(count);
  for (Word i = 0; i < count; ++i) entries.push_back({layout.replace(0, superposed, i), amp});
  SparseState state(layout, std::move(entries));
  state.sort_entries();
  return state;
}

SparseState SparseState::basis(const RegisterLayout& layout, Word label) {
  if (label > low_mask(layout.total_bits())) throw ConfigError("basis: label wider than layout");
  return SparseState(layout, {{label, Amplitude{1.0, 0.0}}});
}

SparseState SparseState::uniform_over(const RegisterLayout& layout, std::size_t reg,
                                      std::span<const Word> values) {
  layout.check_register(reg);
  std::vector<Word> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.empty()) throw ConfigError("uniform_over: empty value set");
  const double amp = 1.0 / std::sqrt(static_cast<double>(distinct.size()));
  std::vector<Entry> entries;
  for (Word v : distinct) {
    if (v > low_mask(layout.width(reg))) throw ConfigError("uniform_over: value wider than register");
    entries.push_back({layout.replace(0, reg, v), amp});
  }
  SparseState state(layout, std::move(entries));
  state.sort_entries();
  return state;
}

void SparseState::sort_entries() {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.label < b.label; });
}

Amplitude SparseState::amplitude(Word label) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), label,
                                   [](const Entry& e, Word l) { return e.label < l; });
  return (it != entries_.end() && it->label == label) ? it->amp : Amplitude{};
}

double SparseState::norm_squared() const {
  double total = 0.0;
  for (const auto& e : entries_) total += std::norm(e.amp);
  return total;
}

void SparseState::apply_oracle_xor(const OracleView& oracle, std::span<const std::size_t> in_regs,
                                   std::span<const std::size_t> out_regs) {
  check_oracle_widths(layout_, oracle, in_regs, out_regs);
  for (auto& e : entries_) {
    const Word x = layout_.gather(e.label, in_regs);
    e.label = layout_.scatter_xor(e.label, out_regs, oracle(x));
  }
  sort_entries();
}

void SparseState::apply_xor_regs(std::size_t src, std::size_t dst) {
  layout_.check_register(src);
  layout_.check_register(dst);
  if (src == dst) throw ConfigError("apply_xor_regs: source and destination must differ");
  if (layout_.width(src) != layout_.width(dst)) {
    throw ConfigError("apply_xor_regs: register widths differ");
  }
  for (auto& e : entries_) {
    const Word v = layout_.extract(e.label, src) ^ layout_.extract(e.label, dst);
    e.label = layout_.replace(e.label, dst, v);
  }
  sort_entries();
}

void SparseState::hadamard_register(std::size_t reg) {
  layout_.check_register(reg);
  const unsigned w = layout_.width(reg);
  const std::size_t dim = std::size_t{1} << w;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));

  // Group by the label with the target register cleared; transform each group.
  std::map<Word, std::vector<Amplitude>> groups;
  for (const auto& e : entries_) {
    auto& column = groups[layout_.replace(e.label, reg, 0)];
    if (column.empty()) column.assign(dim, Amplitude{});
    column[layout_.extract(e.label, reg)] += e.amp;
  }

  std::vector<Entry> next;
  for (auto& [rest, column] : groups) {
    walsh_hadamard(column);
    for (Word y = 0; y < dim; ++y) {
      const Amplitude amp = column[y] * scale;
      if (std::abs(amp) >= kPruneThreshold) next.push_back({layout_.replace(rest, reg, y), amp});
    }
  }
  entries_ = std::move(next);
  sort_entries();
}

std::vector<std::pair<Word, double>> SparseState::marginal(std::size_t reg) const {
  layout_.check_register(reg);
  std::map<Word, double> acc;
  for (const auto& e : entries_) acc[layout_.extract(e.label, reg)] += std::norm(e.amp);
  return {acc.begin(), acc.end()};
}

MeasurementRecord SparseState::measure_register(std::size_t reg, Rng& rng) {
  const auto dist = marginal(reg);
  if (dist.empty()) throw InvariantError("measure_register: empty state");
  return project_register(reg, draw(dist, rng));
}

MeasurementRecord SparseState::project_register(std::size_t reg, Word value) {
  layout_.check_register(reg);
  std::vector<Entry> kept;
  double weight = 0.0;
  for (const auto& e : entries_) {
    if (layout_.extract(e.label, reg) == value) {
      kept.push_back(e);
      weight += std::norm(e.amp);
    }
  }
  if (kept.empty() || weight <= 0.0) {
    throw InvariantError("measurement collapse onto a zero-probability outcome");
  }
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& e : kept) e.amp *= scale;
  MeasurementRecord record{reg, value, kept.size()};
  entries_ = std::move(kept);
  return record;
}

Word SparseState::sample_register(std::size_t reg, Rng& rng) const {
  const auto dist = marginal(reg);
  if (dist.empty()) throw InvariantError("sample_register: empty state");
  return draw(dist, rng);
}

std::vector<Amplitude> SparseState::to_dense() const {
  if (layout_.total_bits() > 26) throw CapacityError("to_dense: layout too wide");
  std::vector<Amplitude> dense(std::size_t{1} << layout_.total_bits());
  for (const auto& e : entries_) dense[e.label] = e.amp;
  return dense;
}

void SparseState::dump(std::ostream& out) const {
  const int digits = static_cast<int>((layout_.total_bits() + 3) / 4);
  char buffer[128];
  for (const auto& e : entries_) {
    std::snprintf(buffer, sizeof buffer, "%0*llx %.17g %.17g\n", digits,
                  static_cast<unsigned long long>(e.label), e.amp.real(), e.amp.imag());
    out << buffer;
  }
}

}  // namespace flab
