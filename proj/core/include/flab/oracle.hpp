#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flab/rng.hpp"

namespace flab {

// Packed bit string. Sub-blocks are laid out with the first one in the most
// significant position, so (a, b) packs as (a << n) | b.
using Word = std::uint64_t;

constexpr Word low_mask(unsigned bits) noexcept {
  return bits >= 64 ? ~Word{0} : (Word{1} << bits) - 1;
}

// Desk-scale caps. Round-function tables hold 2^{(k-1)n} entries and
// random-permutation tables hold 2^{kn} entries.
inline constexpr unsigned kMaxRoundInputBits = 24;
inline constexpr unsigned kMaxPermutationBits = 24;

struct BlockParams {
  unsigned n = 4;  // bits per sub-block
  unsigned k = 2;  // number of sub-blocks
  unsigned d = 1;  // rounds

  unsigned block_bits() const noexcept { return k * n; }
  unsigned round_input_bits() const noexcept { return (k - 1) * n; }

  // Throws ConfigError on n = 0, k < 2, d = 0; CapacityError past the caps.
  void validate() const;

  friend bool operator==(const BlockParams&, const BlockParams&) = default;
};

// Dense lookup table from in_bits to out_bits.
class RoundFunction {
 public:
  RoundFunction(unsigned in_bits, unsigned out_bits, std::vector<std::uint32_t> table);

  static RoundFunction zero(unsigned in_bits, unsigned out_bits);
  static RoundFunction random(unsigned in_bits, unsigned out_bits, Rng& rng);
  // Uniform bijection on bits-bit words.
  static RoundFunction random_permutation(unsigned bits, Rng& rng);
  static RoundFunction from(unsigned in_bits, unsigned out_bits,
                            const std::function<Word(Word)>& fn);

  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }
  std::span<const std::uint32_t> table() const noexcept { return table_; }

  Word operator()(Word x) const noexcept { return table_[x]; }

  friend bool operator==(const RoundFunction&, const RoundFunction&) = default;

 private:
  unsigned in_bits_;
  unsigned out_bits_;
  std::vector<std::uint32_t> table_;
};

// One balanced round: (a, b) -> (b, a ^ f(b)).
std::pair<Word, Word> feistel_round(const RoundFunction& f, Word a, Word b);

// One contracting round on k sub-blocks of n = f.out_bits() bits:
// [I1, ..., Ik] -> [I2, ..., Ik, I1 ^ f(I2 || ... || Ik)].
std::vector<Word> unbalanced_round(const RoundFunction& f, std::span<const Word> sub_blocks);

// Same round on a packed k*n-bit block.
Word unbalanced_round_packed(const RoundFunction& f, unsigned n, unsigned k, Word block) noexcept;

// Uniform permutation of [0, 2^bits). Fisher-Yates for small domains;
// Rao-Sandelius bucket scatter followed by per-bucket Fisher-Yates above
// 2^16 entries. Both are exact.
std::vector<std::uint32_t> random_permutation_table(unsigned bits, Rng& rng);

enum class OracleKind {
  kFeistel,            // FS^r, k = 2, d = r
  kVariantFeistel,     // VFS: 3 rounds, f2 a permutation
  kUnbalanced,         // G_k^d
  kRandomPermutation,  // RP on k*n bits
};

std::string_view to_string(OracleKind kind) noexcept;
OracleKind parse_oracle_kind(std::string_view text);

// Tabulated keyed construction. Immutable after construction; evaluate() is
// safe to call from any number of threads.
class OracleInstance {
 public:
  // Each table t draws from Rng(derive_seed(seed, {t})).
  static OracleInstance build(OracleKind kind, BlockParams params, std::uint64_t seed);

  // Fixture constructors: explicit round functions or an explicit table.
  static OracleInstance from_rounds(OracleKind kind, BlockParams params,
                                    std::vector<RoundFunction> rounds, std::uint64_t seed = 0);
  static OracleInstance from_permutation(BlockParams params, std::vector<std::uint32_t> table,
                                         std::uint64_t seed = 0);

  OracleKind kind() const noexcept { return kind_; }
  const BlockParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  unsigned block_bits() const noexcept { return params_.block_bits(); }
  std::span<const RoundFunction> rounds() const noexcept { return rounds_; }
  std::span<const std::uint32_t> permutation() const noexcept { return permutation_; }

  Word evaluate(Word input) const noexcept;
  // Inverse rounds for Feistel kinds; linear scan for RP.
  Word invert(Word output) const;

  friend bool operator==(const OracleInstance&, const OracleInstance&) = default;

 private:
  OracleInstance(OracleKind kind, BlockParams params, std::uint64_t seed)
      : kind_(kind), params_(params), seed_(seed) {}

  OracleKind kind_;
  BlockParams params_;
  std::uint64_t seed_;
  std::vector<RoundFunction> rounds_;
  std::vector<std::uint32_t> permutation_;
};

// Type-erased classical function embedded by U_C. Lets fixtures that are not
// Feistel constructions (planted-period functions) drive the same engines.
class OracleView {
 public:
  OracleView(unsigned in_bits, unsigned out_bits, std::function<Word(Word)> fn)
      : in_bits_(in_bits), out_bits_(out_bits), fn_(std::move(fn)) {}

  // Non-owning; the instance must outlive the view.
  explicit OracleView(const OracleInstance& oracle)
      : OracleView(oracle.block_bits(), oracle.block_bits(),
                   [&oracle](Word x) { return oracle.evaluate(x); }) {}

  unsigned in_bits() const noexcept { return in_bits_; }
  unsigned out_bits() const noexcept { return out_bits_; }
  Word operator()(Word x) const { return fn_(x); }

 private:
  unsigned in_bits_;
  unsigned out_bits_;
  std::function<Word(Word)> fn_;
};

// JSON dump: {"kind","n","k","d","seed"[,"tables"]}. Loading rebuilds from
// (kind, params, seed) and, if tables are present, checks they match.
std::string oracle_to_json(const OracleInstance& oracle, bool include_tables);
OracleInstance oracle_from_json(std::string_view text);

}  // namespace flab
