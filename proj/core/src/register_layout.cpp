#include <numeric>
#include <string>

#include "flab/error.hpp"
#include "flab/qsim.hpp"

namespace flab {

RegisterLayout::RegisterLayout(std::vector<unsigned> widths) : widths_(std::move(widths)) {
  if (widths_.empty()) throw ConfigError("register layout: no registers");
  for (unsigned w : widths_) {
    if (w == 0) throw ConfigError("register layout: widths must be >= 1");
  }
  total_ = std::accumulate(widths_.begin(), widths_.end(), 0u);
  if (total_ > 64) {
    throw CapacityError("register layout of " + std::to_string(total_) +
                        " qubits does not fit a 64-bit basis label");
  }
  shifts_.resize(widths_.size());
  unsigned shift = total_;
  for (std::size_t r = 0; r < widths_.size(); ++r) {
    shift -= widths_[r];
    shifts_[r] = shift;
  }
}

RegisterLayout RegisterLayout::uniform(std::size_t count, unsigned width) {
  return RegisterLayout(std::vector<unsigned>(count, width));
}

Word RegisterLayout::gather(Word label, std::span<const std::size_t> regs) const noexcept {
  Word value = 0;
  for (std::size_t r : regs) value = (value << widths_[r]) | extract(label, r);
  return value;
}

Word RegisterLayout::scatter_xor(Word label, std::span<const std::size_t> regs,
                                 Word value) const noexcept {
  for (auto it = regs.rbegin(); it != regs.rend(); ++it) {
    const unsigned w = widths_[*it];
    label ^= (value & low_mask(w)) << shifts_[*it];
    value = w >= 64 ? 0 : value >> w;
  }
  return label;
}

unsigned RegisterLayout::combined_width(std::span<const std::size_t> regs) const {
  unsigned total = 0;
  for (std::size_t r : regs) {
    check_register(r);
    total += widths_[r];
  }
  return total;
}

void RegisterLayout::check_register(std::size_t reg) const {
  if (reg >= widths_.size()) {
    throw ConfigError("register index " + std::to_string(reg) + " outside a layout of " +
                      std::to_string(widths_.size()) + " registers");
  }
}

}  // namespace flab
