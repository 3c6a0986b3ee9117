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

#ifndef MQCHECK_MODEL_HPP
#define MQCHECK_MODEL_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "mqcheck/signatures.hpp"
#include "mqcheck/types.hpp"

namespace mqcheck {

/// 1-based line/column; zero means unknown.
struct SourcePos {
  std::uint32_t line = 0;
  std::uint32_t column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

/// One send/recv statement, i.e. one character of a process string.
struct MessageOccurrence {
  Signature signature;
  Role role = Role::Unspecified;
  std::optional<Envelope> envelope;
  SourcePos where;

  static MessageOccurrence abstract(Signature s) { return {s, Role::Unspecified, std::nullopt, {}}; }

  friend bool operator==(const MessageOccurrence&,
                         const MessageOccurrence&) = default;
};

/// One process string. Consumption advances `cursor`; nothing is erased.
struct Sequence {
  Rank rank = 0;
  std::vector<MessageOccurrence> occurrences;
  std::size_t cursor = 0;
  bool closed = false;

  std::size_t size() const { return occurrences.size(); }
  std::size_t remaining() const { return occurrences.size() - cursor; }
  bool exhausted() const { return cursor == occurrences.size(); }
};

class Model {
 public:
  Model() = default;
  explicit Model(Mode mode) : mode_(mode) {}

  Mode mode() const { return mode_; }

  /// Throws UsageError if the rank is already present.
  Sequence& add_sequence(Rank rank) {
    if (!ranks_.insert(rank).second) {
      throw UsageError("duplicate process rank " + std::to_string(rank));
    }
    sequences_.push_back(Sequence{rank, {}, 0, true});
    return sequences_.back();
  }

  bool has_rank(Rank rank) const { return ranks_.count(rank) != 0; }

  std::span<const Sequence> sequences() const { return sequences_; }
  std::span<Sequence> sequences() { return sequences_; }

  SignatureSpace& signatures() { return space_; }
  const SignatureSpace& signatures() const { return space_; }

  std::size_t message_count() const {
    return std::accumulate(
        sequences_.begin(), sequences_.end(), std::size_t{0},
        [](std::size_t n, const Sequence& s) { return n + s.size(); });
  }

  /// Same sequences and signatures with roles and envelopes dropped. The
  /// signature space is copied, so labels still render.
  Model abstracted() const {
    Model out(Mode::Abstract);
    out.space_ = space_;
    out.ranks_ = ranks_;
    out.sequences_ = sequences_;
    for (auto& s : out.sequences_) {
      for (auto& o : s.occurrences) {
        o.role = Role::Unspecified;
        o.envelope.reset();
      }
    }
    return out;
  }

 private:
  Mode mode_ = Mode::Abstract;
  std::vector<Sequence> sequences_;
  std::unordered_set<Rank> ranks_;
  SignatureSpace space_;
};

// ---------------------------------------------------------------------------
// Verdicts

struct IllegalReason {
  enum class Kind : std::uint8_t {
    /// Signature occurs in three or more distinct sequences.
    TooManyProcesses,
    /// Signature occurs in a single sequence.
    SingleProcess,
    /// Strict mode: owning rank is not the envelope endpoint its role needs.
    EndpointMismatch,
    /// Strict mode: occurrence carries no envelope.
    MissingEnvelope,
  };

  Kind kind = Kind::TooManyProcesses;
  Signature signature;
  /// Sorted distinct ranks involved.
  std::vector<Rank> ranks;

  friend bool operator==(const IllegalReason&, const IllegalReason&) = default;
};

inline const char* to_string(IllegalReason::Kind k) {
  switch (k) {
    case IllegalReason::Kind::TooManyProcesses: return "too-many-processes";
    case IllegalReason::Kind::SingleProcess: return "single-process";
    case IllegalReason::Kind::EndpointMismatch: return "endpoint-mismatch";
    case IllegalReason::Kind::MissingEnvelope: return "missing-envelope";
  }
  return "?";
}

struct BlockedEntry {
  Rank rank = 0;
  std::size_t position = 0;
  Signature signature;
  std::optional<Envelope> envelope;

  friend bool operator==(const BlockedEntry&, const BlockedEntry&) = default;
};

struct DeadlockReport {
  /// Pending head of every unfinished sequence, ascending by rank.
  std::vector<BlockedEntry> blocked;
  std::size_t matched_pairs = 0;
  std::size_t residual_messages = 0;

  friend bool operator==(const DeadlockReport&, const DeadlockReport&) = default;
};

struct NoDeadlock {
  std::size_t matched_pairs = 0;
  friend bool operator==(const NoDeadlock&, const NoDeadlock&) = default;
};

enum class VerdictKind : std::uint8_t { Ok, Deadlock, Illegal };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Ok: return "ok";
    case VerdictKind::Deadlock: return "deadlock";
    case VerdictKind::Illegal: return "illegal";
  }
  return "?";
}

class Verdict {
 public:
  Verdict(NoDeadlock v) : v_(v) {}
  Verdict(DeadlockReport r) : v_(std::move(r)) {}
  Verdict(IllegalReason r) : v_(std::move(r)) {}

  VerdictKind kind() const { return static_cast<VerdictKind>(v_.index()); }
  bool ok() const { return kind() == VerdictKind::Ok; }
  bool deadlocked() const { return kind() == VerdictKind::Deadlock; }
  bool illegal() const { return kind() == VerdictKind::Illegal; }

  const NoDeadlock& success() const { return std::get<NoDeadlock>(v_); }
  const DeadlockReport& deadlock() const { return std::get<DeadlockReport>(v_); }
  const IllegalReason& reason() const { return std::get<IllegalReason>(v_); }

  std::size_t matched_pairs() const {
    if (ok()) return success().matched_pairs;
    if (deadlocked()) return deadlock().matched_pairs;
    return 0;
  }

  friend bool operator==(const Verdict&, const Verdict&) = default;

 private:
  std::variant<NoDeadlock, DeadlockReport, IllegalReason> v_;
};

/// Deadlock report for the state left in `seqs` (cursor = consumed prefix).
inline DeadlockReport make_deadlock_report(std::span<const Sequence> seqs,
                                           std::size_t matched_pairs) {
  DeadlockReport r;
  r.matched_pairs = matched_pairs;
  for (const auto& s : seqs) {
    r.residual_messages += s.remaining();
    if (s.exhausted()) continue;
    const auto& head = s.occurrences[s.cursor];
    r.blocked.push_back({s.rank, s.cursor, head.signature, head.envelope});
  }
  std::sort(r.blocked.begin(), r.blocked.end(),
            [](const BlockedEntry& a, const BlockedEntry& b) {
              return a.rank < b.rank;
            });
  return r;
}

// ---------------------------------------------------------------------------
// Static legality

struct ValidationResult {
  std::optional<IllegalReason> illegal;

  bool ok() const { return !illegal.has_value(); }
};

namespace detail {

inline bool endpoint_ok(const MessageOccurrence& o, Rank owner) {
  const Envelope& e = *o.envelope;
  switch (o.role) {
    case Role::Send: return owner == e.source;
    case Role::Recv: return owner == e.destination;
    case Role::Unspecified: return owner == e.source || owner == e.destination;
  }
  return false;
}

}  // namespace detail

/// Every signature must occur in exactly two distinct sequences (any number
/// of times in each). Strict mode additionally requires each occurrence to
/// sit in the envelope endpoint matching its role. Occurrence-count
/// imbalance between the two sequences is not checked here.
///
/// The reported violation is the one whose signature appears first when the
/// sequences are read in rank order, so the result depends neither on the
/// order of `seqs` nor on how signatures were numbered.
inline ValidationResult validate_static(std::span<const Sequence> seqs,
                                        Mode mode) {
  std::vector<std::size_t> order(seqs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seqs[a].rank < seqs[b].rank;
  });

  // Signatures are ranked by first appearance, reading sequences in rank
  // order. Dense values depend on interning order and would not do.
  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> first_seen;
  std::vector<Signature> by_appearance;
  std::vector<std::vector<Rank>> ranks_of;
  for (std::size_t idx : order) {
    const Sequence& s = seqs[idx];
    for (const auto& o : s.occurrences) {
      const auto v = o.signature.value();
      if (v >= ranks_of.size()) {
        ranks_of.resize(std::size_t{v} + 1);
        first_seen.resize(std::size_t{v} + 1, kUnseen);
      }
      if (first_seen[v] == kUnseen) {
        first_seen[v] = static_cast<std::uint32_t>(by_appearance.size());
        by_appearance.push_back(o.signature);
      }
      auto& rs = ranks_of[v];
      if (rs.empty() || rs.back() != s.rank) rs.push_back(s.rank);
    }
  }

  for (Signature sig : by_appearance) {
    const auto& rs = ranks_of[sig.value()];
    if (rs.size() == 2) continue;
    IllegalReason r;
    r.kind = rs.size() == 1 ? IllegalReason::Kind::SingleProcess
                            : IllegalReason::Kind::TooManyProcesses;
    r.signature = sig;
    r.ranks = rs;
    return {std::move(r)};
  }

  if (mode == Mode::Strict) {
    std::optional<std::tuple<std::uint32_t, Rank, IllegalReason::Kind, Signature>> worst;
    for (const auto& s : seqs) {
      for (const auto& o : s.occurrences) {
        IllegalReason::Kind kind;
        if (!o.envelope) {
          kind = IllegalReason::Kind::MissingEnvelope;
        } else if (!detail::endpoint_ok(o, s.rank)) {
          kind = IllegalReason::Kind::EndpointMismatch;
        } else {
          continue;
        }
        std::tuple cand{first_seen[o.signature.value()], s.rank, kind, o.signature};
        if (!worst || cand < *worst) worst = cand;
      }
    }
    if (worst) {
      auto [seen, rank, kind, sig] = *worst;
      return {IllegalReason{kind, sig, {rank}}};
    }
  }
  return {};
}

inline ValidationResult validate_static(const Model& m) {
  return validate_static(m.sequences(), m.mode());
}

}  // namespace mqcheck

#endif  // MQCHECK_MODEL_HPP
