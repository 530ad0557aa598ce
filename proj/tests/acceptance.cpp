// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "flab/campaign.hpp"
#include "flab/classical.hpp"
#include "flab/distinguishers.hpp"
#include "flab/error.hpp"
#include "flab/gf2.hpp"
#include "flab/qsim.hpp"

using namespace flab;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

AlgorithmConfig make_config(Algorithm alg, unsigned n, unsigned q) {
  AlgorithmConfig c;
  c.algorithm = alg;
  c.params = {n, alg == Algorithm::kAlg3 ? 3u : alg == Algorithm::kKPlus1 ? 4u : 2u, 1};
  c.q = q;
  return c;
}

double total_variation(const std::map<Word, double>& a, const std::map<Word, double>& b) {
  std::map<Word, double> diff = a;
  for (const auto& [y, p] : b) diff[y] -= p;
  double tv = 0.0;
  for (const auto& [y, d] : diff) tv += std::abs(d);
  return tv / 2;
}

// ---------------------------------------------------------------------------

Result engine_equivalence() {
  struct Case {
    Algorithm alg;
    unsigned n;
  };
  std::vector<Case> cases;
  for (Algorithm a : {Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kAlg3}) {
    for (unsigned n = 1; n <= 3; ++n) cases.push_back({a, n});
  }
  // 8n qubits: n = 3 would need 24, above the dense cap.
  for (unsigned n = 1; n <= 2; ++n) cases.push_back({Algorithm::kKPlus1, n});

  constexpr int kDraws = 100000;
  double worst_amp = 0.0, worst_tv = 0.0;
  std::string worst_case;
  for (const Case& c : cases) {
    const AlgorithmConfig config = make_config(c.alg, c.n, 1);
    const Script script = iteration_script(config);
    const AlgorithmLayout roles = algorithm_layout(config);
    for (const Label truth : {Label::kScheme, Label::kRandom}) {
      for (std::uint64_t s = 0; s < 3; ++s) {
        const std::uint64_t seed = derive_seed(1000 + c.n, {static_cast<std::uint64_t>(c.alg), s});
        const OracleInstance oracle =
            truth == Label::kScheme
                ? OracleInstance::build(config.scheme_kind(), config.scheme_params(), seed)
                : OracleInstance::build(OracleKind::kRandomPermutation, {c.n, config.params.k, 1},
                                        seed);
        const OracleView view(oracle);

        std::vector<std::vector<Amplitude>> sparse_states;
        Rng rs(seed);
        const ScriptResult sr = run_sparse(script, view, rs, {},
                                           [&](std::size_t, const SparseState& st) {
                                             sparse_states.push_back(st.to_dense());
                                           });
        ScriptOptions forced;
        forced.forced_outcome = sr.measurements.front().value;
        Rng rd(seed);
        run_dense(script, view, rd, forced, [&](std::size_t index, const DenseState& st) {
          const auto amps = st.amplitudes();
          for (std::size_t i = 0; i < amps.size(); ++i) {
            const double d = std::abs(amps[i] - sparse_states[index][i]);
            if (d > worst_amp) {
              worst_amp = d;
              worst_case = std::string(to_string(c.alg)) + " n=" + std::to_string(c.n);
            }
          }
        });

        if (s != 0) continue;
        // Sampled y marginals over the whole pipeline.
        std::map<Word, double> sparse_hist, dense_hist;
        Rng r1(seed ^ 0x5a5a);
        for (int t = 0; t < kDraws; ++t) {
          sparse_hist[run_sparse(script, view, r1).samples.front()] += 1.0 / kDraws;
        }
        // Dense: outcome distribution from the pre-measurement state, then
        // one post-Hadamard state per outcome.
        const std::size_t measure_index =
            static_cast<std::size_t>(std::find_if(script.steps.begin(), script.steps.end(),
                                                  [](const Step& st) {
                                                    return std::holds_alternative<step::Measure>(st);
                                                  }) -
                                     script.steps.begin());
        std::vector<std::pair<Word, double>> outcomes;
        Rng r0(1);
        run_dense(script, view, r0, {}, [&](std::size_t index, const DenseState& st) {
          if (index + 1 == measure_index) outcomes = st.marginal(roles.measured);
        });
        // Post-Hadamard marginal of the superposed register for each outcome.
        std::vector<std::vector<std::pair<Word, double>>> finals;
        for (const auto& [v, p] : outcomes) {
          ScriptOptions o;
          o.forced_outcome = v;
          Rng r(1);
          run_dense(script, view, r, o, [&](std::size_t index, const DenseState& st) {
            if (std::holds_alternative<step::Hadamard>(script.steps[index])) {
              finals.push_back(st.marginal(roles.superposed));
            }
          });
        }
        auto draw = [](const std::vector<std::pair<Word, double>>& dist, double u) {
          std::size_t i = 0;
          while (i + 1 < dist.size() && u >= dist[i].second) u -= dist[i++].second;
          return i;
        };
        Rng r2(seed ^ 0xa5a5);
        for (int t = 0; t < kDraws; ++t) {
          const auto& final_dist = finals[draw(outcomes, r2.uniform01())];
          dense_hist[final_dist[draw(final_dist, r2.uniform01())].first] += 1.0 / kDraws;
        }
        worst_tv = std::max(worst_tv, total_variation(sparse_hist, dense_hist));
      }
    }
  }
  Result r;
  r.pass = worst_amp < 1e-12 && worst_tv <= 0.02;
  r.detail = fmt("%zu cases; max amplitude deviation %.3g (%s), max sampled TV %.4g", cases.size(),
                 worst_amp, worst_case.c_str(), worst_tv);
  return r;
}

// ---------------------------------------------------------------------------

Result hadamard_coset_law() {
  constexpr unsigned n = 6;
  constexpr int kDraws = 100000;
  Rng pick(606);
  Result r;
  std::ostringstream detail;
  for (std::size_t size = 1; size <= 3; ++size) {
    std::vector<Word> set;
    while (set.size() < size) {
      const Word v = pick.bits(n);
      if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
    }
    auto state = SparseState::uniform_over(RegisterLayout({n}), 0, set);
    state.hadamard_register(0);

    std::vector<double> expected(Word{1} << n);
    for (Word y = 0; y < expected.size(); ++y) {
      double s = 0.0;
      for (Word i : set) s += __builtin_parityll(y & i) ? -1.0 : 1.0;
      expected[y] = s * s / (std::ldexp(1.0, n) * static_cast<double>(size));
    }
    std::vector<int> counts(expected.size(), 0);
    Rng rng(derive_seed(2, {size}));
    for (int t = 0; t < kDraws; ++t) ++counts[state.sample_register(0, rng)];

    double chi2 = 0.0;
    int bins = 0, impossible = 0;
    for (Word y = 0; y < expected.size(); ++y) {
      if (expected[y] < 1e-12) {
        impossible += counts[y];
        continue;
      }
      const double e = expected[y] * kDraws;
      chi2 += (counts[y] - e) * (counts[y] - e) / e;
      ++bins;
    }
    const boost::math::chi_squared_distribution<double> dist(bins - 1);
    const double p = boost::math::cdf(boost::math::complement(dist, chi2));
    r.pass = r.pass && p > 0.01 && impossible == 0;
    detail << "|S|=" << size << " chi2=" << fmt("%.2f", chi2) << " df=" << bins - 1
           << " p=" << fmt("%.3f", p) << " off-support=" << impossible << "; ";
  }
  r.detail = detail.str();
  return r;
}

// ---------------------------------------------------------------------------

Result simon_recovery() {
  constexpr unsigned n = 8;
  constexpr int kTrials = 1000;
  const AlgorithmConfig config = make_config(Algorithm::kAlg1, n, 1);
  int exact = 0;
  for (int t = 0; t < kTrials; ++t) {
    Rng setup(derive_seed(3, {static_cast<std::uint64_t>(t)}));
    Word s = 0;
    while (s == 0) s = setup.bits(n);
    const auto h = random_permutation_table(n, setup);
    // Period-s function: h applied to the smaller element of {i, i ^ s}.
    const OracleView g(2 * n, 2 * n, [&](Word x) {
      const Word i = x >> n;
      const Word v = h[std::min(i, i ^ s)];
      return (v << n) | v;
    });
    const TrialOutcome out = simon_trial(g, config, setup);
    if (out.nullspace_dim == 1 && out.witness == s) ++exact;
  }
  Result r;
  const double rate = double(exact) / kTrials;
  r.pass = rate >= 0.96;
  r.detail = fmt("nullspace == {0, s} in %d/%d trials (%.1f%%), n = %u, n+5 samples", exact,
                 kTrials, 100 * rate, n);
  return r;
}

// ---------------------------------------------------------------------------

Result gf2_correctness() {
  Rng rng(4);
  int failures = 0;
  constexpr int kMatrices = 1000;
  for (int t = 0; t < kMatrices; ++t) {
    const auto rows = static_cast<std::size_t>(1 + rng.uniform_below(12));
    const auto cols = static_cast<unsigned>(1 + rng.uniform_below(10));
    gf2::BitMatrix m(cols);
    for (std::size_t i = 0; i < rows; ++i) {
      gf2::Row y = rng.bits(cols);
      if (t % 2 == 0) y &= rng.bits(cols);  // denser nullspaces half the time
      m.append_row(y);
    }
    std::vector<gf2::Row> brute;
    for (gf2::Row x = 0; x < (gf2::Row{1} << cols); ++x) {
      if (m.multiply(x) == 0) brute.push_back(x);
    }
    const auto basis = gf2::nullspace_basis(m);
    std::vector<gf2::Row> span;
    for (gf2::Row mask = 0; mask < (gf2::Row{1} << basis.size()); ++mask) {
      gf2::Row v = 0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if ((mask >> i) & 1) v ^= basis[i];
      }
      span.push_back(v);
    }
    std::sort(span.begin(), span.end());
    const bool independent = std::adjacent_find(span.begin(), span.end()) == span.end();
    if (!independent || span != brute) ++failures;
  }
  Result r;
  r.pass = failures == 0;
  r.detail = fmt("%d failures over %d random matrices up to 12x10", failures, kMatrices);
  return r;
}

// ---------------------------------------------------------------------------

Result classical_separation() {
  Result r;
  std::ostringstream detail;
  for (Algorithm alg : {Algorithm::kAlg2, Algorithm::kAlg3}) {
    ExperimentConfig c;
    c.algorithm = alg;
    c.n = 8;
    c.q = 1;
    c.trials = 200;
    c.seed = 5;
    const ClassicalCampaign out = run_classical(c);
    const bool rp_ok = std::abs(out.mean_random - 128.0) <= 0.15 * 128.0;
    const bool scheme_ok = std::abs(out.mean_scheme - 256.0) <= 0.15 * 256.0;
    const bool acc_ok = out.accuracy >= 0.95;
    r.pass = r.pass && rp_ok && scheme_ok && acc_ok;
    detail << (alg == Algorithm::kAlg2 ? "FS4" : "G34") << " mean N " << fmt("%.1f", out.mean_scheme)
           << " vs RP " << fmt("%.1f", out.mean_random) << ", accuracy "
           << fmt("%.3f", out.accuracy) << "; ";
  }
  r.detail = detail.str();
  return r;
}

// G_k^{k+1} collision counts, reported only.
std::string gk_collision_note() {
  ExperimentConfig c;
  c.algorithm = Algorithm::kKPlus1;
  c.n = 5;
  c.k = 4;
  c.q = 1;
  c.trials = 60;
  c.seed = 55;
  const ClassicalCampaign out = run_classical(c);
  return fmt("G_4^5 at n=5: mean N %.1f vs RP %.1f (2^{n-1} = 16, 2^n = 32), accuracy %.3f",
             out.mean_scheme, out.mean_random, out.accuracy);
}

// ---------------------------------------------------------------------------

Result query_accounting() {
  Result r;
  std::uint64_t checked_trials = 0, checked_runs = 0, bad = 0;
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kAlg3, Algorithm::kKPlus1}) {
    for (unsigned n : {2u, 3u}) {
      ExperimentConfig c;
      c.algorithm = alg;
      c.n = n;
      c.q = 3;
      c.trials = 4;
      c.seed = 6;
      c.mode = n == 2 ? StatisticMode::kStacked : StatisticMode::kPerCoset;
      const ExperimentReport report = run_campaign(c);
      const std::uint64_t per_trial = 2ULL * (n + 5);
      bad += report.quantum_queries_per_trial != per_trial;
      bad += report.quantum_queries_per_run != 3 * per_trial;
      for (const auto& run : report.runs) {
        ++checked_runs;
        bad += run.verdict.oracle_queries != 3 * per_trial;
        for (const auto& trial : run.verdict.trials) {
          ++checked_trials;
          bad += trial.oracle_queries != per_trial;
        }
      }
      if (alg != Algorithm::kAlg1) {
        const ClassicalCampaign classical = run_classical(c);
        for (const auto* group : {&classical.scheme, &classical.random}) {
          for (const auto& rep : *group) bad += rep.m != (std::uint64_t{1} << n);
        }
        bad += classical.queries_per_instance != (std::uint64_t{1} << n);
      }
    }
  }
  r.pass = bad == 0;
  r.detail = fmt("%llu trials, %llu runs, classical m = 2^n; %llu mismatches",
                 static_cast<unsigned long long>(checked_trials),
                 static_cast<unsigned long long>(checked_runs), static_cast<unsigned long long>(bad));
  return r;
}

// ---------------------------------------------------------------------------

Result budget_formulas() {
  const unsigned q1 = query_budget(Algorithm::kAlg1, 1.0 / 27);
  const double b1 = error_bound(Algorithm::kAlg1, q1);
  const unsigned q2 = query_budget(Algorithm::kAlg2, 1.0 / 3);
  Result r;
  r.pass = q1 == 3 && std::abs(b1 - 1.0 / 27) < 1e-15 && q2 == 20;
  r.detail = fmt("ALG1 eps=1/27 -> q=%u bound=%.6g; ALG2 eps=1/3 -> q=%u bound=%.4g", q1, b1, q2,
                 error_bound(Algorithm::kAlg2, q2));
  return r;
}

// ---------------------------------------------------------------------------

struct Variant {
  std::string name;
  AlgorithmConfig config;
  bool injective_statistic = false;
};

struct Tally {
  std::uint64_t cell[2][2] = {};  // [truth][verdict], 0 = scheme
  std::vector<Label> verdicts;     // scheme runs, then RP runs, in instance order
};

Result faithfulness_report() {
  constexpr unsigned kRuns = 500;
  constexpr unsigned kReplay = 25;
  constexpr std::uint64_t kSeed = 8;
  Result r;
  std::ostringstream detail;
  unsigned vfs_checks = 0;

  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kAlg2, Algorithm::kAlg3, Algorithm::kKPlus1}) {
    for (unsigned n : {4u, 6u}) {
      std::vector<Variant> variants;
      auto add = [&](std::string name, StatisticMode mode, unsigned reg, bool injective) {
        AlgorithmConfig c = make_config(alg, n, alg == Algorithm::kAlg1 ? 0u : 21u);
        if (alg == Algorithm::kAlg1) {
          c.q.reset();
          c.epsilon = 1.0 / 27;
        }
        c.mode = mode;
        c.measured_register = reg;
        variants.push_back({std::move(name), c, injective});
      };
      add("literal", StatisticMode::kStacked, 0, false);
      add("per-coset", StatisticMode::kPerCoset, 0, false);
      if (alg == Algorithm::kAlg1) {
        add("register-3", StatisticMode::kStacked, 3, true);
        add("register-3/per-coset", StatisticMode::kPerCoset, 3, true);
      }

      std::vector<Tally> tallies(variants.size());
      auto run_instance = [&](Label truth, unsigned instance, std::vector<Label>& out) {
        const AlgorithmConfig& base = variants.front().config;
        const std::uint64_t oseed = oracle_seed(kSeed, truth, instance);
        const OracleInstance oracle =
            truth == Label::kScheme
                ? OracleInstance::build(base.scheme_kind(), base.scheme_params(), oseed)
                : OracleInstance::build(OracleKind::kRandomPermutation, {n, base.params.k, 1}, oseed);
        out.clear();
        for (const auto& v : variants) {
          out.push_back(distinguish(oracle, v.config, run_seed(kSeed, truth, instance)).label);
        }
      };
      std::vector<Label> labels;
      for (const Label truth : {Label::kScheme, Label::kRandom}) {
        for (unsigned i = 0; i < kRuns; ++i) {
          run_instance(truth, i, labels);
          for (std::size_t v = 0; v < variants.size(); ++v) {
            ++tallies[v].cell[truth == Label::kRandom][labels[v] == Label::kRandom];
            tallies[v].verdicts.push_back(labels[v]);
          }
        }
      }
      // Determinism: replay a prefix of each class and compare verdicts.
      bool replay_ok = true;
      for (const Label truth : {Label::kScheme, Label::kRandom}) {
        const std::size_t offset = truth == Label::kScheme ? 0 : kRuns;
        for (unsigned i = 0; i < kReplay; ++i) {
          run_instance(truth, i, labels);
          for (std::size_t v = 0; v < variants.size(); ++v) {
            replay_ok = replay_ok && labels[v] == tallies[v].verdicts[offset + i];
          }
        }
      }
      r.pass = r.pass && replay_ok;

      for (std::size_t v = 0; v < variants.size(); ++v) {
        const Tally& t = tallies[v];
        const AlgorithmConfig& c = variants[v].config;
        const unsigned q = c.resolved_q();
        const std::uint64_t total = t.cell[0][0] + t.cell[0][1] + t.cell[1][0] + t.cell[1][1];
        const std::uint64_t errors = t.cell[0][1] + t.cell[1][0];
        const Interval ci = wilson_interval(errors, total);
        const double p_scheme_given_scheme = double(t.cell[0][0]) / kRuns;
        std::printf(
            "  %-4s n=%u %-20s q=%-2u reg=%u | truth SCHEME: %3llu SCHEME %3llu RP | truth RP: "
            "%3llu SCHEME %3llu RP | error %.3f [%.3f, %.3f] claimed bound %.3g\n",
            std::string(to_string(alg)).c_str(), n, variants[v].name.c_str(), q,
            c.resolved_measured_register(), static_cast<unsigned long long>(t.cell[0][0]),
            static_cast<unsigned long long>(t.cell[0][1]),
            static_cast<unsigned long long>(t.cell[1][0]),
            static_cast<unsigned long long>(t.cell[1][1]), double(errors) / double(total), ci.lower,
            ci.upper, error_bound(alg, q));
        r.pass = r.pass && total == 2 * kRuns;
        if (variants[v].injective_statistic) {
          ++vfs_checks;
          const double floor = 1.0 - 5.0 * std::ldexp(1.0, -5);
          if (p_scheme_given_scheme < floor) {
            r.pass = false;
            detail << "P(VFS|VFS) " << p_scheme_given_scheme << " < " << floor << " for "
                   << variants[v].name << " n=" << n << "; ";
          }
        }
      }
      std::fflush(stdout);
    }
  }
  detail << vfs_checks << " injective-statistic VFS checks, " << kRuns
         << " runs per class, replayed prefixes identical";
  r.detail = detail.str();
  return r;
}

}  // namespace

// Optional arguments select criteria by number; default runs all.
int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "engine equivalence", engine_equivalence},
      {2, "hadamard coset law", hadamard_coset_law},
      {3, "simon recovery on planted period", simon_recovery},
      {4, "gf2 nullspace correctness", gf2_correctness},
      {5, "classical statistic separation", classical_separation},
      {6, "query accounting", query_accounting},
      {7, "budget formulas", budget_formulas},
      {8, "faithfulness and measurement report", faithfulness_report},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !r.pass;
    std::printf("criterion %d %-36s %s  (%.1fs) %s\n", c.id, c.name, r.pass ? "PASS" : "FAIL",
                seconds, r.detail.c_str());
    std::fflush(stdout);
    if (c.id == 5) {
      try {
        std::printf("  info: %s\n", gk_collision_note().c_str());
      } catch (const std::exception& e) {
        std::printf("  info: gk collision note failed: %s\n", e.what());
      }
    }
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
