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

// Reference backends. Both are written independently of the engine and are
// used to cross-check it.
//
//  * simulate_exhaustive: explores every interleaving of rendezvous over
//    cursor vectors. Exponential; meant for small models.
//  * cycle_check: builds the message-order graph (one node per matched
//    send/recv pair, edges along program order) and looks for a directed
//    cycle with a depth-first search. Linear in |V| + |E|.

#ifndef MQCHECK_ORACLE_HPP
#define MQCHECK_ORACLE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mqcheck/model.hpp"

namespace mqcheck {

class StateCapExceeded : public std::runtime_error {
 public:
  explicit StateCapExceeded(std::size_t cap)
      : std::runtime_error("state cap of " + std::to_string(cap) + " cursor vectors exceeded"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

// ---------------------------------------------------------------------------
// Exhaustive interleaving simulation

struct SimulationResult {
  Verdict verdict;
  /// All maximal paths reached the same ok/deadlock classification.
  bool confluent = true;
  std::size_t states = 0;
  std::size_t terminal_states = 0;
};

namespace detail {

struct CursorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto x : v) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

}  // namespace detail

inline SimulationResult simulate_exhaustive(const Model& model, std::size_t cap = 1'000'000) {
  if (auto v = validate_static(model); !v.ok()) return {Verdict(*v.illegal), true, 0, 0};

  const auto seqs = model.sequences();
  const std::size_t k = seqs.size();
  const std::size_t total = model.message_count();
  using Cursors = std::vector<std::uint32_t>;

  std::unordered_set<Cursors, detail::CursorHash> visited;
  std::vector<Cursors> stack;
  std::vector<Cursors> terminals;

  auto head = [&](const Cursors& c, std::size_t i) -> const MessageOccurrence* {
    return c[i] < seqs[i].size() ? &seqs[i].occurrences[c[i]] : nullptr;
  };

  Cursors start(k, 0);
  visited.insert(start);
  stack.push_back(std::move(start));
  while (!stack.empty()) {
    Cursors cur = std::move(stack.back());
    stack.pop_back();
    bool moved = false;
    for (std::size_t i = 0; i < k; ++i) {
      const auto* hi = head(cur, i);
      if (!hi) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto* hj = head(cur, j);
        if (!hj || hj->signature != hi->signature) continue;
        moved = true;
        Cursors next = cur;
        ++next[i];
        ++next[j];
        if (visited.insert(next).second) {
          if (visited.size() > cap) throw StateCapExceeded(cap);
          stack.push_back(std::move(next));
        }
      }
    }
    if (!moved) terminals.push_back(std::move(cur));
  }

  auto consumed = [](const Cursors& c) {
    std::size_t n = 0;
    for (auto x : c) n += x;
    return n;
  };

  SimulationResult out{NoDeadlock{total / 2}, true, visited.size(), terminals.size()};
  const Cursors* stuck = nullptr;
  bool any_complete = false;
  for (const auto& t : terminals) {
    if (consumed(t) == total) {
      any_complete = true;
    } else if (!stuck || t < *stuck) {
      stuck = &t;
    }
  }
  out.confluent = !(any_complete && stuck);
  if (!any_complete) {
    std::vector<Sequence> state(seqs.begin(), seqs.end());
    for (std::size_t i = 0; i < k; ++i) state[i].cursor = (*stuck)[i];
    out.verdict = make_deadlock_report(state, consumed(*stuck) / 2);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Message-order graph cycle detection

/// One matched pair of the order graph: the k-th occurrence of `signature`
/// in each of its two sequences.
struct WitnessNode {
  Signature signature;
  std::array<Rank, 2> ranks{};
  std::array<std::size_t, 2> positions{};

  friend bool operator==(const WitnessNode&, const WitnessNode&) = default;
};

struct UnpairedOccurrence {
  Rank rank = 0;
  std::size_t position = 0;
  Signature signature;

  friend bool operator==(const UnpairedOccurrence&, const UnpairedOccurrence&) = default;
};

struct CycleResult {
  Verdict verdict;
  /// Nodes of one directed cycle, in edge order. Empty if acyclic.
  std::vector<WitnessNode> cycle;
  /// Occurrences with no partner (occurrence-count imbalance).
  std::vector<UnpairedOccurrence> unpaired;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  /// Node visits plus edge traversals made by the search.
  std::size_t work = 0;
};

inline CycleResult cycle_check(const Model& model) {
  if (auto v = validate_static(model); !v.ok()) {
    CycleResult out{Verdict(*v.illegal), {}, {}};
    return out;
  }

  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  const auto seqs = model.sequences();

  // Per signature: the two sequence indices (ascending by rank) and the
  // occurrence positions in each.
  struct SigInfo {
    std::array<std::uint32_t, 2> seq{kNone, kNone};
    std::array<std::vector<std::size_t>, 2> pos;
  };
  std::vector<SigInfo> sigs;
  for (std::uint32_t i = 0; i < seqs.size(); ++i) {
    for (std::size_t p = 0; p < seqs[i].size(); ++p) {
      const auto v = seqs[i].occurrences[p].signature.value();
      if (v >= sigs.size()) sigs.resize(std::size_t{v} + 1);
      auto& info = sigs[v];
      const int side = info.seq[0] == kNone || info.seq[0] == i ? 0 : 1;
      info.seq[side] = i;
      info.pos[side].push_back(p);
    }
  }
  for (auto& info : sigs) {
    if (info.seq[1] != kNone && seqs[info.seq[1]].rank < seqs[info.seq[0]].rank) {
      std::swap(info.seq[0], info.seq[1]);
      std::swap(info.pos[0], info.pos[1]);
    }
  }

  // Node ids: the k-th pair of signature s gets offset[s] + k.
  std::vector<std::uint32_t> offset(sigs.size() + 1, 0);
  for (std::size_t s = 0; s < sigs.size(); ++s) {
    offset[s + 1] = offset[s] + static_cast<std::uint32_t>(
                                    std::min(sigs[s].pos[0].size(), sigs[s].pos[1].size()));
  }
  const std::uint32_t node_count = offset.back();

  CycleResult out{Verdict(NoDeadlock{node_count}), {}, {}};
  out.nodes = node_count;

  std::vector<std::vector<std::uint32_t>> node_of(seqs.size());
  for (std::uint32_t i = 0; i < seqs.size(); ++i) node_of[i].assign(seqs[i].size(), kNone);
  for (std::size_t s = 0; s < sigs.size(); ++s) {
    const auto& info = sigs[s];
    for (int side = 0; side < 2; ++side) {
      for (std::size_t k = 0; k < info.pos[side].size(); ++k) {
        const auto i = info.seq[side];
        if (k < info.pos[1 - side].size()) {
          node_of[i][info.pos[side][k]] = offset[s] + static_cast<std::uint32_t>(k);
        } else {
          out.unpaired.push_back({seqs[i].rank, info.pos[side][k],
                                  Signature(static_cast<std::uint32_t>(s))});
        }
      }
    }
  }

  // Program-order edges. A node has at most one successor per sequence.
  std::vector<std::array<std::uint32_t, 2>> succ(node_count, {kNone, kNone});
  std::vector<std::uint32_t> indegree(node_count, 0);
  for (std::uint32_t i = 0; i < seqs.size(); ++i) {
    const auto& nodes = node_of[i];
    for (std::size_t p = 0; p + 1 < nodes.size(); ++p) {
      const auto from = nodes[p], to = nodes[p + 1];
      if (to != kNone) ++indegree[to];
      if (from == kNone || to == kNone) continue;
      (succ[from][0] == kNone ? succ[from][0] : succ[from][1]) = to;
      ++out.edges;
    }
  }

  // Iterative three-colour DFS.
  enum : std::uint8_t { White, Grey, Black };
  std::vector<std::uint8_t> colour(node_count, White);
  std::vector<std::pair<std::uint32_t, int>> stack;
  std::vector<std::uint32_t> cycle_nodes;
  for (std::uint32_t root = 0; root < node_count && cycle_nodes.empty(); ++root) {
    if (colour[root] != White) continue;
    colour[root] = Grey;
    ++out.work;
    stack.push_back({root, 0});
    while (!stack.empty() && cycle_nodes.empty()) {
      auto& [u, e] = stack.back();
      if (e == 2 || succ[u][e] == kNone) {
        colour[u] = Black;
        stack.pop_back();
        continue;
      }
      const auto v = succ[u][e++];
      ++out.work;
      if (colour[v] == Grey) {
        auto it = std::find_if(stack.begin(), stack.end(),
                               [v](const auto& f) { return f.first == v; });
        for (; it != stack.end(); ++it) cycle_nodes.push_back(it->first);
      } else if (colour[v] == White) {
        colour[v] = Grey;
        ++out.work;
        stack.push_back({v, 0});
      }
    }
  }

  if (cycle_nodes.empty() && out.unpaired.empty()) return out;

  // Which pairs can ever fire: a node fires once all its program-order
  // predecessors have; anything behind an unpaired occurrence never does.
  std::vector<std::uint32_t> ready;
  for (std::uint32_t n = 0; n < node_count; ++n) {
    if (indegree[n] == 0) ready.push_back(n);
  }
  std::vector<std::uint8_t> fired(node_count, 0);
  std::size_t fired_count = 0;
  while (!ready.empty()) {
    const auto n = ready.back();
    ready.pop_back();
    fired[n] = 1;
    ++fired_count;
    for (auto m : succ[n]) {
      if (m != kNone && --indegree[m] == 0) ready.push_back(m);
    }
  }
  std::vector<Sequence> state(seqs.begin(), seqs.end());
  for (std::uint32_t i = 0; i < seqs.size(); ++i) {
    std::size_t c = 0;
    while (c < node_of[i].size() && node_of[i][c] != kNone && fired[node_of[i][c]]) ++c;
    state[i].cursor = c;
  }
  out.verdict = make_deadlock_report(state, fired_count);

  // Node id -> (signature, k) for the witness.
  for (auto n : cycle_nodes) {
    const auto s = static_cast<std::size_t>(
        std::upper_bound(offset.begin(), offset.end(), n) - offset.begin() - 1);
    const std::size_t k = n - offset[s];
    const auto& info = sigs[s];
    out.cycle.push_back({Signature(static_cast<std::uint32_t>(s)),
                         {seqs[info.seq[0]].rank, seqs[info.seq[1]].rank},
                         {info.pos[0][k], info.pos[1][k]}});
  }
  std::sort(out.unpaired.begin(), out.unpaired.end(),
            [](const UnpairedOccurrence& a, const UnpairedOccurrence& b) {
              return std::tie(a.rank, a.position) < std::tie(b.rank, b.position);
            });
  return out;
}

}  // namespace mqcheck

#endif  // MQCHECK_ORACLE_HPP
