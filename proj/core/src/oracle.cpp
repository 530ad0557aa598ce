#include "flab/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "flab/error.hpp"

namespace flab {

void BlockParams::validate() const {
  if (n == 0) throw ConfigError("block params: n must be >= 1");
  if (k < 2) throw ConfigError("block params: k must be >= 2");
  if (d == 0) throw ConfigError("block params: d must be >= 1");
  if (round_input_bits() > kMaxRoundInputBits) {
    throw CapacityError("round-function table of 2^" + std::to_string(round_input_bits()) +
                        " entries exceeds the desk-scale cap n*(k-1) <= " +
                        std::to_string(kMaxRoundInputBits));
  }
}

RoundFunction::RoundFunction(unsigned in_bits, unsigned out_bits,
                             std::vector<std::uint32_t> table)
    : in_bits_(in_bits), out_bits_(out_bits), table_(std::move(table)) {
  if (in_bits_ > kMaxRoundInputBits || out_bits_ > 32) {
    throw CapacityError("round function " + std::to_string(in_bits_) + "->" +
                        std::to_string(out_bits_) + " bits exceeds table capacity");
  }
  if (table_.size() != (std::size_t{1} << in_bits_)) {
    throw ConfigError("round function table must hold exactly 2^in_bits entries");
  }
  const Word limit = low_mask(out_bits_);
  for (std::uint32_t v : table_) {
    if (v > limit) throw ConfigError("round function entry exceeds out_bits");
  }
}

RoundFunction RoundFunction::zero(unsigned in_bits, unsigned out_bits) {
  return RoundFunction(in_bits, out_bits, std::vector<std::uint32_t>(std::size_t{1} << in_bits, 0));
}

RoundFunction RoundFunction::random(unsigned in_bits, unsigned out_bits, Rng& rng) {
  if (in_bits > kMaxRoundInputBits) {
    throw CapacityError("round function input width exceeds cap");
  }
  std::vector<std::uint32_t> table(std::size_t{1} << in_bits);
  for (auto& entry : table) entry = static_cast<std::uint32_t>(rng.bits(out_bits));
  return RoundFunction(in_bits, out_bits, std::move(table));
}

RoundFunction RoundFunction::random_permutation(unsigned bits, Rng& rng) {
  return RoundFunction(bits, bits, random_permutation_table(bits, rng));
}

RoundFunction RoundFunction::from(unsigned in_bits, unsigned out_bits,
                                  const std::function<Word(Word)>& fn) {
  if (in_bits > kMaxRoundInputBits) {
    throw CapacityError("round function input width exceeds cap");
  }
  std::vector<std::uint32_t> table(std::size_t{1} << in_bits);
  for (std::size_t x = 0; x < table.size(); ++x) {
    table[x] = static_cast<std::uint32_t>(fn(x));
  }
  return RoundFunction(in_bits, out_bits, std::move(table));
}

std::pair<Word, Word> feistel_round(const RoundFunction& f, Word a, Word b) {
  const unsigned n = f.out_bits();
  if (f.in_bits() != n) throw ConfigError("feistel_round: f must map n bits to n bits");
  if (a > low_mask(n) || b > low_mask(n)) throw ConfigError("feistel_round: word wider than n");
  return {b, a ^ f(b)};
}

std::vector<Word> unbalanced_round(const RoundFunction& f, std::span<const Word> sub_blocks) {
  const unsigned n = f.out_bits();
  const auto k = static_cast<unsigned>(sub_blocks.size());
  if (k < 2) throw ConfigError("unbalanced_round: need at least two sub-blocks");
  if (f.in_bits() != (k - 1) * n) {
    throw ConfigError("unbalanced_round: f input width must be (k-1)*n");
  }
  Word rest = 0;
  for (unsigned j = 1; j < k; ++j) {
    if (sub_blocks[j] > low_mask(n)) throw ConfigError("unbalanced_round: word wider than n");
    rest = (rest << n) | sub_blocks[j];
  }
  if (sub_blocks[0] > low_mask(n)) throw ConfigError("unbalanced_round: word wider than n");

  std::vector<Word> out(sub_blocks.begin() + 1, sub_blocks.end());
  out.push_back(sub_blocks[0] ^ f(rest));
  return out;
}

Word unbalanced_round_packed(const RoundFunction& f, unsigned n, unsigned k, Word block) noexcept {
  const unsigned rest_bits = (k - 1) * n;
  const Word head = block >> rest_bits;
  const Word rest = block & low_mask(rest_bits);
  return (rest << n) | (head ^ f(rest));
}

namespace {

void fisher_yates(std::span<std::uint32_t> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_below(i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace

std::vector<std::uint32_t> random_permutation_table(unsigned bits, Rng& rng) {
  if (bits > kMaxPermutationBits) {
    throw CapacityError("random permutation on " + std::to_string(bits) +
                        " bits exceeds the desk-scale cap of " +
                        std::to_string(kMaxPermutationBits) + " bits");
  }
  const std::size_t size = std::size_t{1} << bits;
  constexpr unsigned kSmallBits = 16;
  if (bits <= kSmallBits) {
    std::vector<std::uint32_t> table(size);
    std::iota(table.begin(), table.end(), 0u);
    fisher_yates(table, rng);
    return table;
  }

  // Each element goes to an independent uniform bucket; concatenating
  // independently shuffled buckets yields a uniform permutation.
  constexpr unsigned kBucketBits = 8;
  constexpr std::size_t kBuckets = std::size_t{1} << kBucketBits;
  std::vector<std::uint8_t> bucket_of(size);
  std::vector<std::size_t> offsets(kBuckets + 1, 0);
  for (std::size_t x = 0; x < size; x += 8) {
    std::uint64_t word = rng.next();
    for (std::size_t lane = 0; lane < 8; ++lane, word >>= kBucketBits) {
      const auto b = static_cast<std::uint8_t>(word);
      bucket_of[x + lane] = b;
      ++offsets[b + 1];
    }
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<std::uint32_t> table(size);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t x = 0; x < size; ++x) {
    table[cursor[bucket_of[x]]++] = static_cast<std::uint32_t>(x);
  }
  for (std::size_t b = 0; b < kBuckets; ++b) {
    fisher_yates(std::span(table).subspan(offsets[b], offsets[b + 1] - offsets[b]), rng);
  }
  return table;
}

std::string_view to_string(OracleKind kind) noexcept {
  switch (kind) {
    case OracleKind::kFeistel: return "FS_r";
    case OracleKind::kVariantFeistel: return "VFS";
    case OracleKind::kUnbalanced: return "G_k_d";
    case OracleKind::kRandomPermutation: return "RP";
  }
  return "?";
}

OracleKind parse_oracle_kind(std::string_view text) {
  if (text == "FS_r" || text == "fs" || text == "FS") return OracleKind::kFeistel;
  if (text == "VFS" || text == "vfs") return OracleKind::kVariantFeistel;
  if (text == "G_k_d" || text == "g" || text == "G") return OracleKind::kUnbalanced;
  if (text == "RP" || text == "rp") return OracleKind::kRandomPermutation;
  throw ConfigError("unknown oracle kind '" + std::string(text) + "'");
}

namespace {

void check_shape(OracleKind kind, BlockParams& params) {
  params.validate();
  switch (kind) {
    case OracleKind::kFeistel:
      if (params.k != 2) throw ConfigError("FS_r requires k = 2");
      break;
    case OracleKind::kVariantFeistel:
      if (params.k != 2 || params.d != 3) throw ConfigError("VFS requires k = 2 and d = 3");
      break;
    case OracleKind::kUnbalanced:
      break;
    case OracleKind::kRandomPermutation:
      if (params.block_bits() > kMaxPermutationBits) {
        throw CapacityError("random permutation on " + std::to_string(params.block_bits()) +
                            " bits exceeds the desk-scale cap of " +
                            std::to_string(kMaxPermutationBits) + " bits");
      }
      params.d = 1;
      break;
  }
}

}  // namespace

OracleInstance OracleInstance::build(OracleKind kind, BlockParams params, std::uint64_t seed) {
  check_shape(kind, params);
  OracleInstance oracle(kind, params, seed);
  const unsigned n = params.n;
  switch (kind) {
    case OracleKind::kFeistel:
    case OracleKind::kUnbalanced:
      oracle.rounds_.reserve(params.d);
      for (unsigned t = 0; t < params.d; ++t) {
        Rng rng(derive_seed(seed, {t}));
        oracle.rounds_.push_back(RoundFunction::random(params.round_input_bits(), n, rng));
      }
      break;
    case OracleKind::kVariantFeistel:
      for (unsigned t = 0; t < 3; ++t) {
        Rng rng(derive_seed(seed, {t}));
        oracle.rounds_.push_back(t == 1 ? RoundFunction::random_permutation(n, rng)
                                        : RoundFunction::random(n, n, rng));
      }
      break;
    case OracleKind::kRandomPermutation: {
      Rng rng(derive_seed(seed, {0}));
      oracle.permutation_ = random_permutation_table(params.block_bits(), rng);
      break;
    }
  }
  return oracle;
}

OracleInstance OracleInstance::from_rounds(OracleKind kind, BlockParams params,
                                           std::vector<RoundFunction> rounds, std::uint64_t seed) {
  if (kind == OracleKind::kRandomPermutation) {
    throw ConfigError("from_rounds: RP has no round functions");
  }
  check_shape(kind, params);
  if (rounds.size() != params.d) throw ConfigError("from_rounds: expected d round functions");
  for (const auto& f : rounds) {
    if (f.in_bits() != params.round_input_bits() || f.out_bits() != params.n) {
      throw ConfigError("from_rounds: round function width mismatch");
    }
  }
  if (kind == OracleKind::kVariantFeistel) {
    std::vector<std::uint32_t> sorted(rounds[1].table().begin(), rounds[1].table().end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] != i) throw ConfigError("from_rounds: VFS f2 must be a permutation");
    }
  }
  OracleInstance oracle(kind, params, seed);
  oracle.rounds_ = std::move(rounds);
  return oracle;
}

OracleInstance OracleInstance::from_permutation(BlockParams params,
                                                std::vector<std::uint32_t> table,
                                                std::uint64_t seed) {
  check_shape(OracleKind::kRandomPermutation, params);
  if (table.size() != (std::size_t{1} << params.block_bits())) {
    throw ConfigError("from_permutation: table must cover the whole block domain");
  }
  std::vector<bool> seen(table.size(), false);
  for (std::uint32_t v : table) {
    if (v >= table.size() || seen[v]) throw ConfigError("from_permutation: not a bijection");
    seen[v] = true;
  }
  OracleInstance oracle(OracleKind::kRandomPermutation, params, seed);
  oracle.permutation_ = std::move(table);
  return oracle;
}

Word OracleInstance::evaluate(Word input) const noexcept {
  if (kind_ == OracleKind::kRandomPermutation) return permutation_[input];
  Word block = input;
  for (const auto& f : rounds_) block = unbalanced_round_packed(f, params_.n, params_.k, block);
  return block;
}

Word OracleInstance::invert(Word output) const {
  if (kind_ == OracleKind::kRandomPermutation) {
    const auto it = std::find(permutation_.begin(), permutation_.end(), output);
    if (it == permutation_.end()) throw ConfigError("invert: value outside the block domain");
    return static_cast<Word>(it - permutation_.begin());
  }
  const unsigned n = params_.n;
  const unsigned rest_bits = params_.round_input_bits();
  Word block = output;
  for (auto it = rounds_.rbegin(); it != rounds_.rend(); ++it) {
    const Word rest = block >> n;
    const Word head = (block & low_mask(n)) ^ (*it)(rest);
    block = (head << rest_bits) | rest;
  }
  return block;
}

}  // namespace flab
