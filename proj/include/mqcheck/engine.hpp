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

#ifndef MQCHECK_ENGINE_HPP
#define MQCHECK_ENGINE_HPP

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mqcheck/model.hpp"

namespace mqcheck {

/// Per-signature matcher. Holds at most two member ranks and at most one
/// pending occurrence, so its footprint is constant.
struct MatcherRecord {
  Signature signature;
  std::array<Rank, 2> members{};
  std::uint8_t member_count = 0;
  std::optional<Rank> pending_rank;
  std::size_t pending_position = 0;
  std::size_t matched_count = 0;

  bool has_member(Rank r) const {
    for (std::uint8_t i = 0; i < member_count; ++i) {
      if (members[i] == r) return true;
    }
    return false;
  }
};

/// Signature -> matcher table. Signatures are dense, so the lookup is a
/// direct index; size() counts matchers actually created.
class MessageTable {
 public:
  MatcherRecord* find(Signature s) {
    if (s.value() >= index_.size() || index_[s.value()] == kNone) return nullptr;
    return &records_[index_[s.value()]];
  }
  const MatcherRecord* find(Signature s) const {
    return const_cast<MessageTable*>(this)->find(s);
  }

  MatcherRecord& find_or_create(Signature s) {
    if (s.value() >= index_.size()) {
      index_.resize(std::max<std::size_t>(std::size_t{s.value()} + 1, index_.size() * 2), kNone);
    }
    auto& idx = index_[s.value()];
    if (idx == kNone) {
      idx = static_cast<std::uint32_t>(records_.size());
      MatcherRecord rec;
      rec.signature = s;
      records_.push_back(rec);
    }
    return records_[idx];
  }

  std::size_t size() const { return records_.size(); }
  std::span<const MatcherRecord> records() const { return records_; }

  void reserve(std::size_t signatures) {
    index_.reserve(signatures);
    records_.reserve(signatures);
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index_;
  std::vector<MatcherRecord> records_;
};

struct StepResult {
  enum class Kind : std::uint8_t { Progressed, QueueEmpty, Halted };
  Kind kind;
  /// Set iff kind == Halted.
  std::optional<Verdict> verdict;
};

/// Returned by drain() while some sequence may still grow.
struct StillOpen {
  friend bool operator==(StillOpen, StillOpen) = default;
};

using DrainResult = std::variant<StillOpen, Verdict>;

/// Multi-queue matching engine.
///
/// Sequences whose head is unexamined sit in a FIFO ready queue. A step
/// takes one sequence off the queue and registers its head with the
/// signature's matcher: a third distinct member rank is illegal, a pending
/// partner from the other member completes a rendezvous (both cursors
/// advance and both sequences are re-queued if they have more to offer),
/// otherwise the sequence becomes pending and waits. Each occurrence is
/// examined once, so a full run costs O(n).
///
/// Batch use is load() + drain(). Streaming use interleaves append(),
/// close() and drain(); drain() reports StillOpen until every sequence is
/// closed.
class Engine {
 public:
  explicit Engine(Mode mode = Mode::Abstract) : mode_(mode) {}

  Mode mode() const { return mode_; }

  /// Attaches every sequence of `model` (cursors reset, closed flags kept)
  /// and queues the nonempty ones in model order. Allowed once, on a fresh
  /// engine.
  void load(const Model& model) {
    if (loaded_ || !slots_.empty()) throw UsageError("engine already has sequences");
    loaded_ = true;
    table_.reserve(model.signatures().size());
    for (const auto& s : model.sequences()) {
      const auto slot = new_slot(s.rank);
      auto& seq = seqs_[slot];
      seq.occurrences = s.occurrences;
      check_envelopes(seq.occurrences);
      total_ += seq.size();
      if (s.closed) {
        seq.closed = true;
        --open_;
      }
      if (!seq.occurrences.empty()) enqueue(slot);
    }
  }

  /// Appends `occs` to the tail of `rank`'s sequence, creating it empty on
  /// first use. An idle exhausted sequence is re-queued.
  void append(Rank rank, std::span<const MessageOccurrence> occs) {
    require_accepting();
    auto it = slots_.find(rank);
    const std::uint32_t slot = it == slots_.end() ? new_slot(rank) : it->second;
    auto& seq = seqs_[slot];
    if (seq.closed) throw UsageError("append to closed process " + std::to_string(rank));
    check_envelopes(occs);
    const bool idle = seq.exhausted() && !pending_[slot] && !queued_[slot];
    seq.occurrences.insert(seq.occurrences.end(), occs.begin(), occs.end());
    total_ += occs.size();
    if (idle && !occs.empty() && !verdict_) enqueue(slot);
  }

  /// Declares that `rank` will receive no further appends.
  void close(Rank rank) {
    require_accepting();
    auto it = slots_.find(rank);
    if (it == slots_.end()) throw UsageError("close of unknown process " + std::to_string(rank));
    auto& seq = seqs_[it->second];
    if (seq.closed) throw UsageError("process " + std::to_string(rank) + " already closed");
    seq.closed = true;
    --open_;
  }

  StepResult step() {
    require_running();
    if (queue_.empty()) return {StepResult::Kind::QueueEmpty, std::nullopt};

    const std::uint32_t slot = queue_.front();
    queue_.pop_front();
    queued_[slot] = 0;
    ++steps_;

    Sequence& seq = seqs_[slot];
    const MessageOccurrence& head = seq.occurrences[seq.cursor];

    if (mode_ == Mode::Strict && !detail::endpoint_ok(head, seq.rank)) {
      return halt(IllegalReason{IllegalReason::Kind::EndpointMismatch, head.signature, {seq.rank}});
    }

    MatcherRecord& m = table_.find_or_create(head.signature);
    if (!m.has_member(seq.rank)) {
      if (m.member_count == 2) {
        std::vector<Rank> ranks{m.members[0], m.members[1], seq.rank};
        std::sort(ranks.begin(), ranks.end());
        return halt(IllegalReason{IllegalReason::Kind::TooManyProcesses, head.signature,
                                  std::move(ranks)});
      }
      m.members[m.member_count++] = seq.rank;
    }

    if (!m.pending_rank) {
      m.pending_rank = seq.rank;
      m.pending_position = seq.cursor;
      pending_[slot] = 1;
      return {StepResult::Kind::Progressed, std::nullopt};
    }

    // Rendezvous with the pending partner.
    const std::uint32_t partner = slots_.at(*m.pending_rank);
    assert(partner != slot);
    m.pending_rank.reset();
    ++m.matched_count;
    pending_[partner] = 0;
    ++seq.cursor;
    ++seqs_[partner].cursor;
    ++matched_;

    std::uint32_t lo = slot, hi = partner;
    if (seqs_[hi].rank < seqs_[lo].rank) std::swap(lo, hi);
    if (!seqs_[lo].exhausted()) enqueue(lo);
    if (!seqs_[hi].exhausted()) enqueue(hi);
    return {StepResult::Kind::Progressed, std::nullopt};
  }

  /// Steps until the ready queue is empty or a verdict is reached. With
  /// every sequence closed the verdict is final: NoDeadlock when all
  /// sequences are consumed, otherwise Illegal (if the accumulated model
  /// breaks static legality) or Deadlock.
  DrainResult drain() {
    if (verdict_) {
      // Appends after an illegal halt may add smaller offending signatures.
      if (verdict_->illegal()) canonicalize();
      return *verdict_;
    }
    if (auto halted = run_ready()) return *halted;
    if (open_ > 0) return StillOpen{};

    if (2 * matched_ == total_) {
      verdict_ = NoDeadlock{matched_};
    } else if (auto v = validate_static(seqs_, mode_); !v.ok()) {
      verdict_ = std::move(*v.illegal);
    } else {
      verdict_ = make_deadlock_report(seqs_, matched_);
    }
    return *verdict_;
  }

  /// Steps until the ready queue is empty, without finalizing. Returns the
  /// verdict only if a step halted. Lets a caller that may still create new
  /// sequences make progress.
  std::optional<Verdict> run_ready() {
    if (verdict_) return verdict_;
    while (!queue_.empty()) {
      auto r = step();
      if (r.kind == StepResult::Kind::Halted) return r.verdict;
    }
    return std::nullopt;
  }

  bool all_closed() const { return open_ == 0; }

  /// Reorders the ready queue. `order` must be a permutation of it.
  void set_ready_order(std::span<const Rank> order) {
    std::vector<std::uint32_t> next;
    next.reserve(order.size());
    for (Rank r : order) {
      auto it = slots_.find(r);
      if (it == slots_.end() || !queued_[it->second]) {
        throw UsageError("rank " + std::to_string(r) + " is not queued");
      }
      next.push_back(it->second);
    }
    std::vector<std::uint32_t> a(next), b(queue_.begin(), queue_.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw UsageError("ready order is not a permutation of the queue");
    queue_.assign(next.begin(), next.end());
  }

  std::vector<Rank> ready_queue() const {
    std::vector<Rank> out;
    for (auto slot : queue_) out.push_back(seqs_[slot].rank);
    return out;
  }

  const MatcherRecord* matcher(Signature s) const { return table_.find(s); }
  const MessageTable& message_table() const { return table_; }
  std::span<const Sequence> sequences() const { return seqs_; }

  std::size_t steps() const { return steps_; }
  std::size_t matched_pairs() const { return matched_; }
  std::size_t message_count() const { return total_; }
  std::size_t table_size() const { return table_.size(); }
  bool finished() const { return verdict_.has_value(); }
  const std::optional<Verdict>& verdict() const { return verdict_; }

 private:
  std::uint32_t new_slot(Rank rank) {
    const auto slot = static_cast<std::uint32_t>(seqs_.size());
    if (!slots_.emplace(rank, slot).second) {
      throw UsageError("duplicate process rank " + std::to_string(rank));
    }
    seqs_.push_back(Sequence{rank, {}, 0, false});
    queued_.push_back(0);
    pending_.push_back(0);
    ++open_;
    return slot;
  }

  void enqueue(std::uint32_t slot) {
    queued_[slot] = 1;
    queue_.push_back(slot);
  }

  void check_envelopes(std::span<const MessageOccurrence> occs) const {
    if (mode_ != Mode::Strict) return;
    for (const auto& o : occs) {
      if (!o.envelope) throw UsageError("strict engine requires envelope-bearing occurrences");
    }
  }

  void require_running() const {
    if (verdict_) throw UsageError("engine already reached a verdict");
  }

  // An illegal engine still records appends and closes so the final reason
  // can cover the whole input.
  void require_accepting() const {
    if (verdict_ && !verdict_->illegal()) throw UsageError("engine already reached a verdict");
  }

  // The step that trips a violation depends on scheduling. Report the one
  // the static check finds first instead, so every schedule agrees.
  StepResult halt(IllegalReason reason) {
    verdict_ = Verdict(std::move(reason));
    canonicalize();
    return {StepResult::Kind::Halted, verdict_};
  }

  void canonicalize() {
    if (auto v = validate_static(seqs_, mode_); !v.ok()) verdict_ = std::move(*v.illegal);
  }

  Mode mode_;
  bool loaded_ = false;
  std::vector<Sequence> seqs_;
  std::vector<std::uint8_t> queued_;
  std::vector<std::uint8_t> pending_;
  std::unordered_map<Rank, std::uint32_t> slots_;
  std::deque<std::uint32_t> queue_;
  MessageTable table_;
  std::size_t open_ = 0;
  std::size_t total_ = 0;
  std::size_t matched_ = 0;
  std::size_t steps_ = 0;
  std::optional<Verdict> verdict_;
};

/// One-shot batch check. Every sequence of `model` must be closed.
inline Verdict engine_check(const Model& model) {
  Engine engine(model.mode());
  engine.load(model);
  auto r = engine.drain();
  if (auto* v = std::get_if<Verdict>(&r)) return *v;
  throw UsageError("engine_check: model has open sequences");
}

}  // namespace mqcheck

#endif  // MQCHECK_ENGINE_HPP
