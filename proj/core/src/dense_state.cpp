#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>

#include "flab/error.hpp"
#include "flab/qsim.hpp"

namespace flab {

namespace {

unsigned shift_of(const RegisterLayout& layout, std::size_t reg) {
  return static_cast<unsigned>(std::countr_zero(layout.replace(0, reg, 1)));
}

Word draw(const std::vector<std::pair<Word, double>>& marginal, Rng& rng) {
  double total = 0.0;
  for (const auto& entry : marginal) total += entry.second;
  const double u = rng.uniform01() * total;
  double cumulative = 0.0;
  for (const auto& [value, p] : marginal) {
    cumulative += p;
    if (u < cumulative) return value;
  }
  return marginal.back().first;
}

constexpr double kZeroProbability = kPruneThreshold * kPruneThreshold;

}  // namespace

DenseState DenseState::uniform(const RegisterLayout& layout, std::size_t superposed,
                               unsigned qubit_cap) {
  if (layout.total_bits() > qubit_cap) {
    throw CapacityError("dense engine: " + std::to_string(layout.total_bits()) +
                        " qubits exceeds the cap of " + std::to_string(qubit_cap));
  }
  layout.check_register(superposed);
  std::vector<Amplitude> amps(std::size_t{1} << layout.total_bits());
  const std::size_t count = std::size_t{1} << layout.width(superposed);
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (Word i = 0; i < count; ++i) amps[layout.replace(0, superposed, i)] = amp;
  return DenseState(layout, std::move(amps));
}

std::size_t DenseState::support_size() const {
  std::size_t count = 0;
  for (const auto& a : amps_) count += std::abs(a) >= kPruneThreshold ? 1 : 0;
  return count;
}

double DenseState::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

void DenseState::apply_oracle_xor(const OracleView& oracle, std::span<const std::size_t> in_regs,
                                  std::span<const std::size_t> out_regs) {
  if (layout_.combined_width(in_regs) != oracle.in_bits() ||
      layout_.combined_width(out_regs) != oracle.out_bits()) {
    throw ConfigError("apply_oracle_xor: register widths do not match the oracle");
  }
  std::vector<Amplitude> next(amps_.size());
  for (Word label = 0; label < amps_.size(); ++label) {
    const Word target = layout_.scatter_xor(label, out_regs, oracle(layout_.gather(label, in_regs)));
    next[target] = amps_[label];
  }
  amps_ = std::move(next);
}

void DenseState::apply_xor_regs(std::size_t src, std::size_t dst) {
  layout_.check_register(src);
  layout_.check_register(dst);
  if (src == dst) throw ConfigError("apply_xor_regs: source and destination must differ");
  if (layout_.width(src) != layout_.width(dst)) {
    throw ConfigError("apply_xor_regs: register widths differ");
  }
  std::vector<Amplitude> next(amps_.size());
  for (Word label = 0; label < amps_.size(); ++label) {
    const Word v = layout_.extract(label, src) ^ layout_.extract(label, dst);
    next[layout_.replace(label, dst, v)] = amps_[label];
  }
  amps_ = std::move(next);
}

void DenseState::hadamard_register(std::size_t reg) {
  layout_.check_register(reg);
  const unsigned base = shift_of(layout_, reg);
  const double r = 1.0 / std::sqrt(2.0);
  for (unsigned b = 0; b < layout_.width(reg); ++b) {
    const Word bit = Word{1} << (base + b);
    for (Word label = 0; label < amps_.size(); ++label) {
      if (label & bit) continue;
      const Amplitude x = amps_[label];
      const Amplitude y = amps_[label | bit];
      amps_[label] = (x + y) * r;
      amps_[label | bit] = (x - y) * r;
    }
  }
}

std::vector<std::pair<Word, double>> DenseState::marginal(std::size_t reg) const {
  layout_.check_register(reg);
  std::vector<double> acc(std::size_t{1} << layout_.width(reg), 0.0);
  for (Word label = 0; label < amps_.size(); ++label) {
    acc[layout_.extract(label, reg)] += std::norm(amps_[label]);
  }
  std::vector<std::pair<Word, double>> out;
  for (Word v = 0; v < acc.size(); ++v) {
    if (acc[v] > kZeroProbability) out.emplace_back(v, acc[v]);
  }
  return out;
}

MeasurementRecord DenseState::measure_register(std::size_t reg, Rng& rng) {
  const auto dist = marginal(reg);
  if (dist.empty()) throw InvariantError("measure_register: zero state");
  return project_register(reg, draw(dist, rng));
}

MeasurementRecord DenseState::project_register(std::size_t reg, Word value) {
  layout_.check_register(reg);
  double weight = 0.0;
  std::size_t kept = 0;
  for (Word label = 0; label < amps_.size(); ++label) {
    if (layout_.extract(label, reg) != value) {
      amps_[label] = {};
    } else if (std::abs(amps_[label]) >= kPruneThreshold) {
      weight += std::norm(amps_[label]);
      ++kept;
    }
  }
  if (weight <= 0.0) throw InvariantError("measurement collapse onto a zero-probability outcome");
  const double scale = 1.0 / std::sqrt(weight);
  for (auto& a : amps_) a *= scale;
  return {reg, value, kept};
}

Word DenseState::sample_register(std::size_t reg, Rng& rng) const {
  const auto dist = marginal(reg);
  if (dist.empty()) throw InvariantError("sample_register: zero state");
  return draw(dist, rng);
}

std::vector<double> DenseState::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

namespace {

template <class> inline constexpr bool kAlwaysFalse = false;

template <class State, class Factory>
ScriptResult run_script(const Script& script, const OracleView& oracle, Rng& rng,
                        const ScriptOptions& options, const StepObserver<State>& observer,
                        Factory make_state, std::optional<State>& state) {
  ScriptResult result;
  for (std::size_t index = 0; index < script.steps.size(); ++index) {
    const Step& current = script.steps[index];
    if (!state && !std::holds_alternative<step::Prepare>(current)) {
      throw ConfigError("script: the first step must prepare a state");
    }
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, step::Prepare>) {
            state.emplace(make_state(s.superposed));
          } else if constexpr (std::is_same_v<T, step::Oracle>) {
            state->apply_oracle_xor(oracle, s.in_regs, s.out_regs);
            ++result.oracle_applications;
          } else if constexpr (std::is_same_v<T, step::XorRegs>) {
            state->apply_xor_regs(s.src, s.dst);
          } else if constexpr (std::is_same_v<T, step::Measure>) {
            result.measurements.push_back(options.forced_outcome
                                              ? state->project_register(s.reg, *options.forced_outcome)
                                              : state->measure_register(s.reg, rng));
          } else if constexpr (std::is_same_v<T, step::Hadamard>) {
            state->hadamard_register(s.reg);
          } else if constexpr (std::is_same_v<T, step::Sample>) {
            result.samples.push_back(state->sample_register(s.reg, rng));
          } else {
            static_assert(kAlwaysFalse<T>, "unhandled step");
          }
        },
        current);
    result.max_support = std::max(result.max_support, state->support_size());
    if (observer) observer(index, *state);
  }
  return result;
}

}  // namespace

ScriptResult run_sparse(const Script& script, const OracleView& oracle, Rng& rng,
                        const ScriptOptions& options, const StepObserver<SparseState>& observer) {
  std::optional<SparseState> state;
  return run_script<SparseState>(
      script, oracle, rng, options, observer,
      [&](std::size_t reg) { return SparseState::uniform(script.layout, reg); }, state);
}

ScriptResult run_dense(const Script& script, const OracleView& oracle, Rng& rng,
                       const ScriptOptions& options, const StepObserver<DenseState>& observer) {
  std::optional<DenseState> state;
  return run_script<DenseState>(
      script, oracle, rng, options, observer,
      [&](std::size_t reg) {
        return DenseState::uniform(script.layout, reg, options.dense_qubit_cap);
      },
      state);
}

DenseReferenceRun dense_reference_run(const Script& script, const OracleView& oracle,
                                      std::uint64_t seed, unsigned qubit_cap) {
  if (script.layout.total_bits() > qubit_cap) {
    throw CapacityError("dense_reference_run: " + std::to_string(script.layout.total_bits()) +
                        " qubits exceeds the cap of " + std::to_string(qubit_cap));
  }
  Rng rng(seed);
  ScriptOptions options;
  options.dense_qubit_cap = qubit_cap;
  std::vector<double> final_probabilities;
  auto result = run_dense(script, oracle, rng, options,
                          [&](std::size_t index, const DenseState& state) {
                            if (index + 1 == script.steps.size()) {
                              final_probabilities = state.probabilities();
                            }
                          });
  return {std::move(result), std::move(final_probabilities)};
}

}  // namespace flab
