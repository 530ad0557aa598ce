#include <string>

#include "flab/error.hpp"
#include "flab/oracle.hpp"
#include "json.hpp"

namespace flab {

using nlohmann::json;

std::string oracle_to_json(const OracleInstance& oracle, bool include_tables) {
  json j;
  j["kind"] = std::string(to_string(oracle.kind()));
  j["n"] = oracle.params().n;
  j["k"] = oracle.params().k;
  j["d"] = oracle.params().d;
  j["seed"] = oracle.seed();
  j["prng"] = std::string(kPrngId);
  if (include_tables) {
    json tables = json::array();
    for (const auto& f : oracle.rounds()) {
      tables.push_back(json(std::vector<std::uint32_t>(f.table().begin(), f.table().end())));
    }
    if (oracle.kind() == OracleKind::kRandomPermutation) {
      tables.push_back(json(std::vector<std::uint32_t>(oracle.permutation().begin(),
                                                       oracle.permutation().end())));
    }
    j["tables"] = std::move(tables);
  }
  return j.dump();
}

OracleInstance oracle_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("oracle json: ") + e.what());
  }
  try {
    const OracleKind kind = parse_oracle_kind(j.at("kind").get<std::string>());
    BlockParams params{j.at("n").get<unsigned>(), j.at("k").get<unsigned>(),
                       j.at("d").get<unsigned>()};
    const auto seed = j.at("seed").get<std::uint64_t>();
    OracleInstance oracle = OracleInstance::build(kind, params, seed);

    if (j.contains("tables")) {
      const auto& tables = j.at("tables");
      std::size_t expected = oracle.rounds().size();
      if (kind == OracleKind::kRandomPermutation) expected = 1;
      if (tables.size() != expected) throw ConfigError("oracle json: wrong number of tables");
      for (std::size_t t = 0; t < oracle.rounds().size(); ++t) {
        const auto stored = tables[t].get<std::vector<std::uint32_t>>();
        const auto table = oracle.rounds()[t].table();
        if (!std::equal(stored.begin(), stored.end(), table.begin(), table.end())) {
          throw ConfigError("oracle json: table " + std::to_string(t) +
                            " does not match the (kind, params, seed) reconstruction");
        }
      }
      if (kind == OracleKind::kRandomPermutation) {
        const auto stored = tables[0].get<std::vector<std::uint32_t>>();
        const auto table = oracle.permutation();
        if (!std::equal(stored.begin(), stored.end(), table.begin(), table.end())) {
          throw ConfigError("oracle json: permutation does not match reconstruction");
        }
      }
    }
    return oracle;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("oracle json: ") + e.what());
  }
}

}  // namespace flab
