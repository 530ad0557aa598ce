#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "flab/oracle.hpp"
#include "flab/rng.hpp"

namespace flab {

using Amplitude = std::complex<double>;

// Magnitudes below this are dropped from sparse states.
inline constexpr double kPruneThreshold = 1e-15;
inline constexpr unsigned kDefaultDenseQubitCap = 20;

// Ordered register widths. Registers are 0-based here; register 0 occupies
// the most significant bits of a basis label.
class RegisterLayout {
 public:
  explicit RegisterLayout(std::vector<unsigned> widths);
  static RegisterLayout uniform(std::size_t count, unsigned width);

  std::size_t size() const noexcept { return widths_.size(); }
  unsigned width(std::size_t reg) const { return widths_.at(reg); }
  unsigned total_bits() const noexcept { return total_; }
  std::span<const unsigned> widths() const noexcept { return widths_; }

  Word extract(Word label, std::size_t reg) const noexcept {
    return (label >> shifts_[reg]) & low_mask(widths_[reg]);
  }
  Word replace(Word label, std::size_t reg, Word value) const noexcept {
    const Word mask = low_mask(widths_[reg]) << shifts_[reg];
    return (label & ~mask) | ((value << shifts_[reg]) & mask);
  }
  // Concatenation of several registers, first listed most significant.
  Word gather(Word label, std::span<const std::size_t> regs) const noexcept;
  // Xor a concatenated value into several registers.
  Word scatter_xor(Word label, std::span<const std::size_t> regs, Word value) const noexcept;
  unsigned combined_width(std::span<const std::size_t> regs) const;

  void check_register(std::size_t reg) const;

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  std::vector<unsigned> widths_;
  std::vector<unsigned> shifts_;
  unsigned total_ = 0;
};

struct MeasurementRecord {
  std::size_t reg = 0;
  Word value = 0;
  std::size_t preimage_size = 0;  // labels consistent with the outcome
};

// Pure state stored as (label, amplitude) pairs sorted by label.
class SparseState {
 public:
  struct Entry {
    Word label;
    Amplitude amp;
  };

  // 2^{-w/2} sum_i |.., i, ..> with every other register 0.
  static SparseState uniform(const RegisterLayout& layout, std::size_t superposed);
  static SparseState basis(const RegisterLayout& layout, Word label);
  // Uniform superposition over the given values of one register.
  static SparseState uniform_over(const RegisterLayout& layout, std::size_t reg,
                                  std::span<const Word> values);

  const RegisterLayout& layout() const noexcept { return layout_; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  Amplitude amplitude(Word label) const;
  double norm_squared() const;

  // |x>|y> -> |x>|y ^ oracle(x)> over the listed registers.
  void apply_oracle_xor(const OracleView& oracle, std::span<const std::size_t> in_regs,
                        std::span<const std::size_t> out_regs);
  // dst <- dst ^ src.
  void apply_xor_regs(std::size_t src, std::size_t dst);
  void hadamard_register(std::size_t reg);

  // Exact marginal of one register, sorted by value.
  std::vector<std::pair<Word, double>> marginal(std::size_t reg) const;
  MeasurementRecord measure_register(std::size_t reg, Rng& rng);
  // Collapse onto a chosen outcome (post-selection); throws InvariantError
  // when the outcome has zero probability.
  MeasurementRecord project_register(std::size_t reg, Word value);
  Word sample_register(std::size_t reg, Rng& rng) const;

  std::vector<Amplitude> to_dense() const;
  // One line per label: "label_hex re im", sorted by label.
  void dump(std::ostream& out) const;

 private:
  SparseState(RegisterLayout layout, std::vector<Entry> entries)
      : layout_(std::move(layout)), entries_(std::move(entries)) {}
  void sort_entries();

  RegisterLayout layout_;
  std::vector<Entry> entries_;
};

// Full 2^total amplitude vector. Reference engine for equivalence tests.
class DenseState {
 public:
  static DenseState uniform(const RegisterLayout& layout, std::size_t superposed,
                            unsigned qubit_cap = kDefaultDenseQubitCap);

  const RegisterLayout& layout() const noexcept { return layout_; }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  std::size_t support_size() const;
  double norm_squared() const;

  void apply_oracle_xor(const OracleView& oracle, std::span<const std::size_t> in_regs,
                        std::span<const std::size_t> out_regs);
  void apply_xor_regs(std::size_t src, std::size_t dst);
  void hadamard_register(std::size_t reg);

  std::vector<std::pair<Word, double>> marginal(std::size_t reg) const;
  MeasurementRecord measure_register(std::size_t reg, Rng& rng);
  MeasurementRecord project_register(std::size_t reg, Word value);
  Word sample_register(std::size_t reg, Rng& rng) const;

  std::vector<double> probabilities() const;

 private:
  DenseState(RegisterLayout layout, std::vector<Amplitude> amps)
      : layout_(std::move(layout)), amps_(std::move(amps)) {}

  RegisterLayout layout_;
  std::vector<Amplitude> amps_;
};

// Scripted step sequence shared by both engines.
namespace step {
struct Prepare { std::size_t superposed; };
struct Oracle { std::vector<std::size_t> in_regs, out_regs; };
struct XorRegs { std::size_t src, dst; };
struct Measure { std::size_t reg; };
struct Hadamard { std::size_t reg; };
struct Sample { std::size_t reg; };
}  // namespace step

using Step = std::variant<step::Prepare, step::Oracle, step::XorRegs, step::Measure,
                          step::Hadamard, step::Sample>;

struct Script {
  RegisterLayout layout;
  std::vector<Step> steps;
};

struct ScriptResult {
  std::vector<MeasurementRecord> measurements;
  std::vector<Word> samples;
  std::uint64_t oracle_applications = 0;
  std::size_t max_support = 0;
};

struct ScriptOptions {
  // When set, every Measure step collapses onto this value instead of sampling.
  std::optional<Word> forced_outcome;
  unsigned dense_qubit_cap = kDefaultDenseQubitCap;
};

template <class State>
using StepObserver = std::function<void(std::size_t step_index, const State& state)>;

// Runs the script on a fresh state. Each Oracle step counts as one query.
ScriptResult run_sparse(const Script& script, const OracleView& oracle, Rng& rng,
                        const ScriptOptions& options = {},
                        const StepObserver<SparseState>& observer = {});
ScriptResult run_dense(const Script& script, const OracleView& oracle, Rng& rng,
                       const ScriptOptions& options = {},
                       const StepObserver<DenseState>& observer = {});

struct DenseReferenceRun {
  ScriptResult result;
  std::vector<double> final_probabilities;
};

// Dense replay of a script for equivalence testing. Refuses layouts above the
// qubit cap with CapacityError.
DenseReferenceRun dense_reference_run(const Script& script, const OracleView& oracle,
                                      std::uint64_t seed,
                                      unsigned qubit_cap = kDefaultDenseQubitCap);

}  // namespace flab
