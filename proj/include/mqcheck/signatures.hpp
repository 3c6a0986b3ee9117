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

#ifndef MQCHECK_SIGNATURES_HPP
#define MQCHECK_SIGNATURES_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mqcheck/types.hpp"
#include "mqcheck/utf8.hpp"

namespace mqcheck {

/// Thrown when an envelope cannot be registered (source == destination).
class InvalidEnvelope : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Create-or-retrieve table of dense signatures.
///
/// Envelopes are keyed through a four-level hash (communicator, source,
/// destination, tag); abstract characters through a flat hash. Both kinds
/// draw from the same counter, so the k-th distinct key registered receives
/// the value k-1 and signatures can be used directly as array indices.
class SignatureSpace {
 public:
  using Key = std::variant<Envelope, char32_t>;

  Signature set_signature_for(const Envelope& e) {
    if (e.source == e.destination) {
      throw InvalidEnvelope("envelope source and destination are both " +
                            std::to_string(e.source));
    }
    auto& slot = table_[e.communicator][e.source][e.destination];
    auto [it, inserted] = slot.try_emplace(e.tag, next());
    if (inserted) reverse_.emplace_back(e);
    return it->second;
  }

  Signature intern_character(char32_t ch) {
    auto [it, inserted] = chars_.try_emplace(ch, next());
    if (inserted) reverse_.emplace_back(ch);
    return it->second;
  }

  /// Lookup without registering.
  std::optional<Signature> find(const Envelope& e) const {
    auto c = table_.find(e.communicator);
    if (c == table_.end()) return std::nullopt;
    auto s = c->second.find(e.source);
    if (s == c->second.end()) return std::nullopt;
    auto d = s->second.find(e.destination);
    if (d == s->second.end()) return std::nullopt;
    auto t = d->second.find(e.tag);
    if (t == d->second.end()) return std::nullopt;
    return t->second;
  }

  std::optional<Signature> find(char32_t ch) const {
    auto it = chars_.find(ch);
    if (it == chars_.end()) return std::nullopt;
    return it->second;
  }

  /// Registering envelope of `sig`, or nullopt for a character signature.
  /// Throws std::out_of_range for a value never issued.
  std::optional<Envelope> envelope_of(Signature sig) const {
    const Key& k = key_of(sig);
    if (const auto* e = std::get_if<Envelope>(&k)) return *e;
    return std::nullopt;
  }

  std::optional<char32_t> character_of(Signature sig) const {
    const Key& k = key_of(sig);
    if (const auto* c = std::get_if<char32_t>(&k)) return *c;
    return std::nullopt;
  }

  const Key& key_of(Signature sig) const {
    if (sig.value() >= reverse_.size()) {
      throw std::out_of_range("unknown signature " +
                              std::to_string(sig.value()));
    }
    return reverse_[sig.value()];
  }

  /// Human-readable name: the character itself, or "tag,src,dst,comm".
  std::string label(Signature sig) const {
    const Key& k = key_of(sig);
    if (const auto* c = std::get_if<char32_t>(&k)) return utf8::encode(*c);
    const auto& e = std::get<Envelope>(k);
    return std::to_string(e.tag) + ',' + std::to_string(e.source) + ',' +
           std::to_string(e.destination) + ',' +
           std::to_string(e.communicator);
  }

  std::size_t size() const { return reverse_.size(); }
  bool empty() const { return reverse_.empty(); }

 private:
  template <class K, class V>
  using Map = std::unordered_map<K, V>;

  Signature next() const {
    return Signature(static_cast<std::uint32_t>(reverse_.size()));
  }

  Map<std::uint32_t, Map<Rank, Map<Rank, Map<std::uint32_t, Signature>>>>
      table_;
  Map<char32_t, Signature> chars_;
  std::vector<Key> reverse_;
};

}  // namespace mqcheck

#endif  // MQCHECK_SIGNATURES_HPP
