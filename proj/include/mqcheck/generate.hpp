// Copyright 2026 The mqcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MQCHECK_GENERATE_HPP
#define MQCHECK_GENERATE_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mqcheck/engine.hpp"
#include "mqcheck/model.hpp"
#include "mqcheck/oracle.hpp"

namespace mqcheck {

enum class Pattern : std::uint8_t { Pairs, Ring, RandomLegal };

inline const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::Pairs: return "pairs";
    case Pattern::Ring: return "ring";
    case Pattern::RandomLegal: return "random";
  }
  return "?";
}

inline std::optional<Pattern> pattern_from_string(std::string_view s) {
  if (s == "pairs") return Pattern::Pairs;
  if (s == "ring") return Pattern::Ring;
  if (s == "random" || s == "random-legal") return Pattern::RandomLegal;
  return std::nullopt;
}

struct GenSpec {
  Pattern pattern = Pattern::Pairs;
  std::uint32_t processes = 2;
  /// Pairs / RandomLegal: messages per process (on average for RandomLegal).
  /// Ring: number of rounds; each round adds two messages per process.
  std::uint32_t messages_per_process = 1;
  std::uint64_t seed = 0;
  /// RandomLegal only: maximum distance a message may move when each
  /// process's sequence is locally shuffled. Zero keeps generation order,
  /// which is always deadlock free.
  std::uint32_t shuffle_window = 3;
};

namespace detail {

class ModelBuilder {
 public:
  explicit ModelBuilder(std::uint32_t processes) : model_(Mode::Strict), seqs_(processes) {}

  void rendezvous(Rank from, Rank to, std::uint32_t tag) {
    const Envelope e{tag, from, to, 0};
    const Signature sig = model_.signatures().set_signature_for(e);
    seqs_[from].push_back({sig, Role::Send, e, {}});
    seqs_[to].push_back({sig, Role::Recv, e, {}});
  }

  std::vector<MessageOccurrence>& sequence(Rank r) { return seqs_[r]; }

  void send(Rank self, Rank to, std::uint32_t tag) { push(self, Role::Send, {tag, self, to, 0}); }
  void recv(Rank self, Rank from, std::uint32_t tag) { push(self, Role::Recv, {tag, from, self, 0}); }

  Model finish() && {
    for (Rank r = 0; r < seqs_.size(); ++r) model_.add_sequence(r).occurrences = std::move(seqs_[r]);
    return std::move(model_);
  }

 private:
  void push(Rank self, Role role, const Envelope& e) {
    seqs_[self].push_back({model_.signatures().set_signature_for(e), role, e, {}});
  }

  Model model_;
  std::vector<std::vector<MessageOccurrence>> seqs_;
};

}  // namespace detail

inline void validate(const GenSpec& spec) {
  const std::uint32_t min_p = spec.pattern == Pattern::Ring ? 3 : 2;
  if (spec.processes < min_p) {
    throw std::invalid_argument(std::string(to_string(spec.pattern)) + " needs at least " +
                                std::to_string(min_p) + " processes");
  }
  if (spec.messages_per_process < 1) throw std::invalid_argument("M must be at least 1");
}

/// Deterministic in (pattern, processes, messages_per_process, seed,
/// shuffle_window). Models are strict; tags are unique per model so every
/// rendezvous has its own signature.
inline Model generate(const GenSpec& spec) {
  validate(spec);
  const std::uint32_t p = spec.processes;
  const std::uint32_t m = spec.messages_per_process;
  detail::ModelBuilder b(p);

  switch (spec.pattern) {
    case Pattern::Pairs: {
      // Processes 2k and 2k+1 exchange m messages, alternating direction.
      // An odd last process stays empty.
      std::uint32_t tag = 0;
      for (Rank a = 0; a + 1 < p; a += 2) {
        for (std::uint32_t j = 0; j < m; ++j) {
          if (j % 2 == 0) {
            b.rendezvous(a, a + 1, tag++);
          } else {
            b.rendezvous(a + 1, a, tag++);
          }
        }
      }
      break;
    }
    case Pattern::Ring: {
      // Each round: link i carries a message from i to i+1 for i < p-1, and
      // the closing link carries one from 0 to p-1. Process 0 sends on the
      // closing link first, the last process receives on it last, so every
      // process waits on its neighbour.
      for (std::uint32_t round = 0; round < m; ++round) {
        const std::uint32_t base = round * p;
        const std::uint32_t closing = base + p - 1;
        b.send(0, p - 1, closing);
        b.send(0, 1, base);
        for (Rank i = 1; i + 1 < p; ++i) {
          b.recv(i, i - 1, base + i - 1);
          b.send(i, i + 1, base + i);
        }
        b.recv(p - 1, p - 2, base + p - 2);
        b.recv(p - 1, 0, closing);
      }
      break;
    }
    case Pattern::RandomLegal: {
      std::mt19937_64 rng(spec.seed);
      auto below = [&rng](std::uint64_t n) { return rng() % n; };
      const std::uint64_t pairs = std::max<std::uint64_t>(1, std::uint64_t{p} * m / 2);
      for (std::uint32_t tag = 0; tag < pairs; ++tag) {
        const auto a = static_cast<Rank>(below(p));
        auto c = static_cast<Rank>(below(p - 1));
        if (c >= a) ++c;
        b.rendezvous(a, c, tag);
      }
      if (spec.shuffle_window > 0) {
        for (Rank r = 0; r < p; ++r) {
          auto& seq = b.sequence(r);
          for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            if (below(4) != 0) continue;
            const std::size_t reach = std::min<std::size_t>(spec.shuffle_window, seq.size() - 1 - i);
            std::swap(seq[i], seq[i + 1 + below(reach)]);
          }
        }
      }
      break;
    }
  }
  return std::move(b).finish();
}

// ---------------------------------------------------------------------------
// Benchmark harness

struct BenchRow {
  std::string backend;
  Pattern pattern = Pattern::Pairs;
  std::uint32_t processes = 0;
  std::uint32_t messages_per_process = 0;
  std::size_t n = 0;
  double median_ms = 0;
  /// Engine: matching steps. Cycle: node visits plus edge traversals.
  std::size_t steps = 0;
  /// Engine: matchers created. Cycle: graph nodes.
  std::size_t peak_table = 0;
  VerdictKind verdict = VerdictKind::Ok;
};

inline constexpr std::string_view kBenchCsvHeader = "backend,pattern,P,M,n,median_ms,steps";

namespace detail {

template <class F>
double median_ms(std::size_t reps, F&& run) {
  run();  // warm-up, discarded
  std::vector<double> times;
  for (std::size_t i = 0; i < std::max<std::size_t>(reps, 1); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    run();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  return times.size() % 2 ? times[mid] : (times[mid - 1] + times[mid]) / 2;
}

}  // namespace detail

/// Times the engine and the cycle detector on the same model.
inline BenchRow bench_engine(const Model& model, const GenSpec& spec, std::size_t reps) {
  BenchRow row{"engine", spec.pattern, spec.processes, spec.messages_per_process,
               model.message_count()};
  std::optional<Verdict> verdict;
  row.median_ms = detail::median_ms(reps, [&] {
    Engine e(model.mode());
    e.load(model);
    verdict = std::get<Verdict>(e.drain());
    row.steps = e.steps();
    row.peak_table = e.table_size();
  });
  row.verdict = verdict->kind();
  return row;
}

inline BenchRow bench_cycle(const Model& model, const GenSpec& spec, std::size_t reps) {
  BenchRow row{"cycle", spec.pattern, spec.processes, spec.messages_per_process,
               model.message_count()};
  std::optional<Verdict> verdict;
  row.median_ms = detail::median_ms(reps, [&] {
    auto r = cycle_check(model);
    verdict = r.verdict;
    row.steps = r.work;
    row.peak_table = r.nodes;
  });
  row.verdict = verdict->kind();
  return row;
}

inline std::vector<BenchRow> bench_run(const GenSpec& spec, std::size_t repetitions) {
  const Model model = generate(spec);
  return {bench_engine(model, spec, repetitions), bench_cycle(model, spec, repetitions)};
}

}  // namespace mqcheck

#endif  // MQCHECK_GENERATE_HPP
