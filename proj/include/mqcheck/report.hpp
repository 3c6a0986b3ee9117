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

// Machine- and human-readable verdict reports.
//
// Signatures are rendered by label (the abstract character, or
// "tag,src,dst,comm"), never by numeric value: the numbering depends on the
// order in which messages were first seen, the label does not.

#ifndef MQCHECK_REPORT_HPP
#define MQCHECK_REPORT_HPP

#include <array>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqcheck/model.hpp"
#include "mqcheck/oracle.hpp"

namespace mqcheck {

struct ReportEntry {
  Rank process = 0;
  std::size_t position = 0;
  std::string signature;
  std::optional<Envelope> envelope;

  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct ReportReason {
  std::string kind;
  std::string signature;
  std::vector<Rank> processes;

  friend bool operator==(const ReportReason&, const ReportReason&) = default;
};

struct ReportStats {
  std::size_t messages = 0;
  /// Engine steps (or oracle work). May differ between batch and stream
  /// runs of the same model.
  std::size_t steps = 0;
  std::size_t distinct_signatures = 0;

  friend bool operator==(const ReportStats&, const ReportStats&) = default;
};

struct ReportWitness {
  std::string signature;
  std::array<Rank, 2> processes{};
  std::array<std::size_t, 2> positions{};

  friend bool operator==(const ReportWitness&, const ReportWitness&) = default;
};

struct Report {
  VerdictKind verdict = VerdictKind::Ok;
  std::vector<ReportEntry> blocked;
  std::size_t matched_pairs = 0;
  std::size_t residual = 0;
  std::optional<ReportReason> reason;
  ReportStats stats;

  // Oracle runs only.
  std::optional<std::string> backend;
  std::optional<std::vector<ReportWitness>> witness;
  std::optional<std::vector<ReportEntry>> unpaired;
  std::optional<std::string> confluence;
  std::optional<std::size_t> states;

  friend bool operator==(const Report&, const Report&) = default;
};

inline Report make_report(const Verdict& v, const SignatureSpace& space, ReportStats stats) {
  Report r;
  r.verdict = v.kind();
  r.stats = stats;
  switch (v.kind()) {
    case VerdictKind::Ok:
      r.matched_pairs = v.success().matched_pairs;
      r.residual = stats.messages - 2 * r.matched_pairs;
      break;
    case VerdictKind::Deadlock: {
      const auto& d = v.deadlock();
      r.matched_pairs = d.matched_pairs;
      r.residual = d.residual_messages;
      for (const auto& b : d.blocked) {
        r.blocked.push_back({b.rank, b.position, space.label(b.signature), b.envelope});
      }
      break;
    }
    case VerdictKind::Illegal: {
      const auto& why = v.reason();
      r.residual = stats.messages;
      r.reason = ReportReason{to_string(why.kind), space.label(why.signature), why.ranks};
      break;
    }
  }
  return r;
}

inline Report make_report(const CycleResult& c, const SignatureSpace& space, ReportStats stats) {
  Report r = make_report(c.verdict, space, stats);
  r.backend = "cycle";
  std::vector<ReportWitness> w;
  for (const auto& n : c.cycle) w.push_back({space.label(n.signature), n.ranks, n.positions});
  r.witness = std::move(w);
  std::vector<ReportEntry> u;
  for (const auto& o : c.unpaired) u.push_back({o.rank, o.position, space.label(o.signature), {}});
  r.unpaired = std::move(u);
  return r;
}

inline Report make_report(const SimulationResult& s, const SignatureSpace& space, ReportStats stats) {
  Report r = make_report(s.verdict, space, stats);
  r.backend = "simulate";
  r.confluence = s.confluent ? "agreed" : "disagreed";
  r.states = s.states;
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const Envelope& e) {
  j = {{"tag", e.tag}, {"source", e.source}, {"destination", e.destination},
       {"communicator", e.communicator}};
}

inline void from_json(const nlohmann::json& j, Envelope& e) {
  j.at("tag").get_to(e.tag);
  j.at("source").get_to(e.source);
  j.at("destination").get_to(e.destination);
  j.at("communicator").get_to(e.communicator);
}

inline void to_json(nlohmann::json& j, const ReportEntry& b) {
  j = {{"process", b.process}, {"position", b.position}, {"signature", b.signature}};
  if (b.envelope) j["envelope"] = *b.envelope;
}

inline void from_json(const nlohmann::json& j, ReportEntry& b) {
  j.at("process").get_to(b.process);
  j.at("position").get_to(b.position);
  j.at("signature").get_to(b.signature);
  if (j.contains("envelope")) b.envelope = j.at("envelope").get<Envelope>();
}

inline void to_json(nlohmann::json& j, const ReportWitness& w) {
  j = {{"signature", w.signature}, {"processes", w.processes}, {"positions", w.positions}};
}

inline void from_json(const nlohmann::json& j, ReportWitness& w) {
  j.at("signature").get_to(w.signature);
  j.at("processes").get_to(w.processes);
  j.at("positions").get_to(w.positions);
}

inline void to_json(nlohmann::json& j, const Report& r) {
  j = nlohmann::json::object();
  j["verdict"] = to_string(r.verdict);
  j["blocked"] = r.blocked;
  j["matchedPairs"] = r.matched_pairs;
  j["residual"] = r.residual;
  if (r.reason) {
    j["reason"] = {{"kind", r.reason->kind},
                   {"signature", r.reason->signature},
                   {"processes", r.reason->processes}};
  } else {
    j["reason"] = nullptr;
  }
  j["stats"] = {{"messages", r.stats.messages},
                {"steps", r.stats.steps},
                {"distinctSignatures", r.stats.distinct_signatures}};
  if (r.backend) j["backend"] = *r.backend;
  if (r.witness) j["witness"] = *r.witness;
  if (r.unpaired) j["unpaired"] = *r.unpaired;
  if (r.confluence) j["confluence"] = *r.confluence;
  if (r.states) j["states"] = *r.states;
}

inline void from_json(const nlohmann::json& j, Report& r) {
  const auto v = j.at("verdict").get<std::string>();
  if (v == "ok") {
    r.verdict = VerdictKind::Ok;
  } else if (v == "deadlock") {
    r.verdict = VerdictKind::Deadlock;
  } else if (v == "illegal") {
    r.verdict = VerdictKind::Illegal;
  } else {
    throw std::invalid_argument("unknown verdict '" + v + "'");
  }
  j.at("blocked").get_to(r.blocked);
  j.at("matchedPairs").get_to(r.matched_pairs);
  j.at("residual").get_to(r.residual);
  r.reason.reset();
  if (const auto& why = j.at("reason"); !why.is_null()) {
    r.reason = ReportReason{why.at("kind").get<std::string>(),
                            why.at("signature").get<std::string>(),
                            why.at("processes").get<std::vector<Rank>>()};
  }
  const auto& s = j.at("stats");
  s.at("messages").get_to(r.stats.messages);
  s.at("steps").get_to(r.stats.steps);
  s.at("distinctSignatures").get_to(r.stats.distinct_signatures);
  auto opt = [&j](const char* key, auto& field) {
    using T = typename std::remove_reference_t<decltype(field)>::value_type;
    if (j.contains(key)) {
      field = j.at(key).get<T>();
    } else {
      field.reset();
    }
  };
  opt("backend", r.backend);
  opt("witness", r.witness);
  opt("unpaired", r.unpaired);
  opt("confluence", r.confluence);
  opt("states", r.states);
}

inline std::string to_json_string(const Report& r) { return nlohmann::json(r).dump(2); }

inline Report report_from_json(std::string_view text) {
  return nlohmann::json::parse(text).get<Report>();
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string describe(const ReportEntry& b) {
  if (!b.envelope) return b.signature;
  std::ostringstream os;
  const auto& e = *b.envelope;
  os << "tag=" << e.tag << " " << e.source << "->" << e.destination;
  if (e.communicator != 0) os << " comm=" << e.communicator;
  return os.str();
}

}  // namespace detail

inline void write_text(std::ostream& os, const Report& r) {
  if (r.backend) os << "backend: " << *r.backend << "\n";
  os << "verdict: " << to_string(r.verdict) << "\n";
  switch (r.verdict) {
    case VerdictKind::Ok:
      os << "all " << r.matched_pairs << " rendezvous complete\n";
      break;
    case VerdictKind::Deadlock:
      os << "matched pairs: " << r.matched_pairs << ", residual messages: " << r.residual << "\n";
      os << "blocked:\n";
      for (const auto& b : r.blocked) {
        os << "  process " << b.process << " at position " << b.position << " waiting on "
           << detail::describe(b) << "\n";
      }
      break;
    case VerdictKind::Illegal:
      os << "reason: " << r.reason->kind << ": signature " << r.reason->signature
         << " in process" << (r.reason->processes.size() == 1 ? " " : "es ");
      for (std::size_t i = 0; i < r.reason->processes.size(); ++i) {
        os << (i ? ", " : "") << r.reason->processes[i];
      }
      os << "\n";
      break;
  }
  if (r.witness && !r.witness->empty()) {
    os << "wait cycle:";
    for (const auto& w : *r.witness) {
      os << " " << w.signature << "[P" << w.processes[0] << "@" << w.positions[0] << ",P"
         << w.processes[1] << "@" << w.positions[1] << "]";
    }
    os << "\n";
  }
  if (r.unpaired && !r.unpaired->empty()) {
    os << "unpaired:";
    for (const auto& u : *r.unpaired) os << " " << u.signature << "[P" << u.process << "@" << u.position << "]";
    os << "\n";
  }
  if (r.confluence) os << "confluence: " << *r.confluence << " (" << r.states.value_or(0) << " states)\n";
  os << "stats: messages=" << r.stats.messages << " steps=" << r.stats.steps
     << " distinct_signatures=" << r.stats.distinct_signatures << "\n";
}

}  // namespace mqcheck

#endif  // MQCHECK_REPORT_HPP
