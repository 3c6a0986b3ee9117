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

#ifndef MQCHECK_TYPES_HPP
#define MQCHECK_TYPES_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mqcheck {

/// Process rank. Ranks are opaque distinct integers; they need not be
/// contiguous.
using Rank = std::uint32_t;

/// Point-to-point message envelope <tag, source, destination, communicator>.
struct Envelope {
  std::uint32_t tag = 0;
  Rank source = 0;
  Rank destination = 0;
  std::uint32_t communicator = 0;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Envelope& e) {
  return os << "(tag=" << e.tag << ", src=" << e.source
            << ", dst=" << e.destination << ", comm=" << e.communicator << ")";
}

/// Dense integer identity of one message kind.
class Signature {
 public:
  constexpr Signature() = default;
  constexpr explicit Signature(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const { return value_; }

  friend constexpr auto operator<=>(Signature, Signature) = default;

 private:
  std::uint32_t value_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, Signature s) {
  return os << '#' << s.value();
}

enum class Role : std::uint8_t { Unspecified, Send, Recv };

enum class Mode : std::uint8_t { Abstract, Strict };

inline const char* to_string(Mode m) {
  return m == Mode::Strict ? "strict" : "abstract";
}

/// Misuse of an API contract (closed sequence, finished engine, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mqcheck

template <>
struct std::hash<mqcheck::Signature> {
  std::size_t operator()(mqcheck::Signature s) const noexcept {
    return std::hash<std::uint32_t>{}(s.value());
  }
};

#endif  // MQCHECK_TYPES_HPP
