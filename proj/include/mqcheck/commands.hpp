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

// Subcommand implementations behind the mqcheck tool. Each returns the
// process exit code and writes only to the streams it is given.

#ifndef MQCHECK_COMMANDS_HPP
#define MQCHECK_COMMANDS_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mqcheck/engine.hpp"
#include "mqcheck/generate.hpp"
#include "mqcheck/oracle.hpp"
#include "mqcheck/parser.hpp"
#include "mqcheck/report.hpp"

namespace mqcheck {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDeadlock = 2,
  kExitIllegal = 3,
  kExitStateCap = 4,
};

inline int exit_code_for(VerdictKind k) {
  switch (k) {
    case VerdictKind::Ok: return kExitOk;
    case VerdictKind::Deadlock: return kExitDeadlock;
    case VerdictKind::Illegal: return kExitIllegal;
  }
  return kExitUsage;
}

enum class Format { Text, Json };
enum class InputMode { Auto, Strict, Abstract };

struct CheckOptions {
  std::string path;
  Format format = Format::Text;
  InputMode mode = InputMode::Auto;
  bool validate_only = false;
};

struct StreamOptions {
  Format format = Format::Text;
  InputMode mode = InputMode::Auto;
};

struct OracleOptions {
  std::string path;
  enum class Backend { Simulate, Cycle } backend = Backend::Cycle;
  std::size_t cap = 1'000'000;
  Format format = Format::Text;
  InputMode mode = InputMode::Auto;
};

struct BenchOptions {
  GenSpec spec;
  std::size_t seeds = 1;
  std::size_t reps = 5;
  bool csv = false;
};

struct GenOptions {
  GenSpec spec;
  std::string out{};  // empty: write to the output stream
  enum class As { Dsl, Abstract } as = As::Dsl;
};

namespace detail {

inline void emit(std::ostream& out, const Report& r, Format f) {
  if (f == Format::Json) {
    out << to_json_string(r) << "\n";
  } else {
    write_text(out, r);
  }
}

inline std::optional<std::string> slurp(const std::string& path, std::istream& stdin_) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(stdin_), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Reads and parses `path`; on failure prints a positioned message and
/// returns nullopt.
inline std::optional<Model> load_model(const std::string& path, InputMode mode,
                                       std::istream& in, std::ostream& err) {
  auto text = slurp(path, in);
  if (!text) {
    err << "mqcheck: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  try {
    switch (mode) {
      case InputMode::Strict: return parse_dsl(*text);
      case InputMode::Abstract: return parse_abstract(*text);
      case InputMode::Auto: return parse_auto(*text);
    }
  } catch (const ParseError& e) {
    err << path << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
  } catch (const std::exception& e) {
    err << path << ": error: " << e.what() << "\n";
  }
  return std::nullopt;
}

inline ReportStats stats_of(const Model& m, std::size_t steps) {
  return {m.message_count(), steps, m.signatures().size()};
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err,
                     std::istream& in = std::cin) {
  auto model = detail::load_model(opt.path, opt.mode, in, err);
  if (!model) return kExitUsage;

  if (opt.validate_only) {
    auto v = validate_static(*model);
    Verdict verdict = v.ok() ? Verdict(NoDeadlock{}) : Verdict(*v.illegal);
    Report r = make_report(verdict, model->signatures(), detail::stats_of(*model, 0));
    if (v.ok()) r.residual = 0;
    detail::emit(out, r, opt.format);
    return exit_code_for(r.verdict);
  }

  Engine engine(model->mode());
  engine.load(*model);
  const Verdict verdict = std::get<Verdict>(engine.drain());
  const Report r = make_report(verdict, model->signatures(), detail::stats_of(*model, engine.steps()));
  detail::emit(out, r, opt.format);
  return exit_code_for(r.verdict);
}

// ---------------------------------------------------------------------------
// Streaming
//
//   append <rank> <token>...   token: abstract characters, or tag,src,dst[,comm]
//   close <rank>
//   end
//
// Blank lines and lines starting with '#' are ignored. The engine makes
// progress after every event; the verdict is reported at `end`, including
// an illegal one found earlier.

namespace detail {

class StreamSession {
 public:
  explicit StreamSession(InputMode mode) : requested_(mode) {}

  /// Applies one event line, then lets the engine make progress.
  void apply(std::string_view line) {
    std::istringstream words{std::string(line)};
    std::string cmd;
    words >> cmd;
    if (cmd == "append") {
      const Rank rank = read_rank(words);
      std::vector<MessageOccurrence> occs;
      std::string tok;
      while (words >> tok) add_token(tok, rank, occs);
      engine(occs.empty() ? std::nullopt : std::optional(mode_of(occs)))
          .append(rank, occs);
    } else if (cmd == "close") {
      const Rank rank = read_rank(words);
      expect_end(words);
      engine(std::nullopt).close(rank);
    } else if (cmd == "end") {
      expect_end(words);
      ended_ = true;
      return;
    } else {
      throw std::invalid_argument("unknown event '" + cmd + "'");
    }
    engine_->run_ready();
  }

  bool ended() const { return ended_; }

  /// Final verdict after `end`; throws if a sequence is still open.
  Verdict finish() {
    std::string open;
    for (const auto& s : engine(std::nullopt).sequences()) {
      if (!s.closed) open += " " + std::to_string(s.rank);
    }
    if (!open.empty()) throw std::invalid_argument("stream ended with open process(es):" + open);
    return std::get<Verdict>(engine_->drain());
  }

  const SignatureSpace& space() const { return space_; }
  const Engine& current() { return engine(std::nullopt); }

  ReportStats stats() const {
    return {engine_ ? engine_->message_count() : 0, engine_ ? engine_->steps() : 0, space_.size()};
  }

 private:
  static Rank read_rank(std::istringstream& words) {
    std::string tok;
    if (!(words >> tok)) throw std::invalid_argument("missing process rank");
    auto v = to_u32(tok);
    if (!v) throw std::invalid_argument("malformed process rank '" + tok + "'");
    return *v;
  }

  static void expect_end(std::istringstream& words) {
    std::string extra;
    if (words >> extra) throw std::invalid_argument("unexpected '" + extra + "'");
  }

  static Mode mode_of(const std::vector<MessageOccurrence>& occs) {
    return occs.front().envelope ? Mode::Strict : Mode::Abstract;
  }

  static std::optional<Envelope> quadruple(std::string_view tok) {
    if (tok.find(',') == std::string_view::npos) return std::nullopt;
    std::vector<std::uint32_t> parts;
    while (true) {
      auto comma = tok.find(',');
      auto v = to_u32(tok.substr(0, comma));
      if (!v) throw std::invalid_argument("malformed envelope token");
      parts.push_back(*v);
      if (comma == std::string_view::npos) break;
      tok.remove_prefix(comma + 1);
    }
    if (parts.size() != 3 && parts.size() != 4) {
      throw std::invalid_argument("envelope token needs tag,src,dst[,comm]");
    }
    return Envelope{parts[0], parts[1], parts[2], parts.size() == 4 ? parts[3] : 0};
  }

  void add_token(const std::string& tok, Rank rank, std::vector<MessageOccurrence>& occs) {
    if (auto env = quadruple(tok)) {
      MessageOccurrence o;
      o.signature = space_.set_signature_for(*env);
      o.role = rank == env->source ? Role::Send
               : rank == env->destination ? Role::Recv
                                          : Role::Unspecified;
      o.envelope = *env;
      push(o, occs);
      return;
    }
    std::size_t pos = 0;
    while (pos < tok.size()) {
      auto cp = utf8::decode(tok, pos);
      if (!cp) throw std::invalid_argument("invalid UTF-8 in token");
      push(MessageOccurrence::abstract(space_.intern_character(*cp)), occs);
    }
  }

  static void push(const MessageOccurrence& o, std::vector<MessageOccurrence>& occs) {
    if (!occs.empty() && occs.front().envelope.has_value() != o.envelope.has_value()) {
      throw std::invalid_argument("cannot mix envelope and character tokens");
    }
    occs.push_back(o);
  }

  Engine& engine(std::optional<Mode> hint) {
    if (!engine_) {
      Mode m = requested_ == InputMode::Strict ? Mode::Strict : Mode::Abstract;
      if (requested_ == InputMode::Auto && hint) m = *hint;
      engine_.emplace(m);
    }
    if (hint && *hint != engine_->mode()) {
      throw std::invalid_argument(std::string("expected ") + to_string(engine_->mode()) +
                                  " tokens");
    }
    return *engine_;
  }

  InputMode requested_;
  SignatureSpace space_;
  std::optional<Engine> engine_;
  bool ended_ = false;
};

}  // namespace detail

inline int cmd_stream(std::istream& in, const StreamOptions& opt, std::ostream& out,
                      std::ostream& err) {
  detail::StreamSession session(opt.mode);
  std::string line;
  std::size_t lineno = 0;
  std::optional<Verdict> verdict;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      if (session.ended()) throw std::invalid_argument("event after 'end'");
      session.apply(line);
    }
    if (!session.ended()) {
      ++lineno;
      throw std::invalid_argument("input ended without 'end'");
    }
    verdict = session.finish();
  } catch (const std::exception& e) {
    err << "stream:" << lineno << ": error: " << e.what() << "\n";
    return kExitUsage;
  }
  const Report r = make_report(*verdict, session.space(), session.stats());
  detail::emit(out, r, opt.format);
  return exit_code_for(r.verdict);
}

// ---------------------------------------------------------------------------

inline int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err,
                      std::istream& in = std::cin) {
  auto model = detail::load_model(opt.path, opt.mode, in, err);
  if (!model) return kExitUsage;
  Report r;
  if (opt.backend == OracleOptions::Backend::Cycle) {
    auto res = cycle_check(*model);
    r = make_report(res, model->signatures(), detail::stats_of(*model, res.work));
  } else {
    try {
      auto res = simulate_exhaustive(*model, opt.cap);
      r = make_report(res, model->signatures(), detail::stats_of(*model, res.states));
    } catch (const StateCapExceeded& e) {
      err << "oracle: " << e.what() << "\n";
      return kExitStateCap;
    }
  }
  detail::emit(out, r, opt.format);
  return exit_code_for(r.verdict);
}

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<BenchRow> rows;
  try {
    validate(opt.spec);
    for (std::size_t s = 0; s < std::max<std::size_t>(opt.seeds, 1); ++s) {
      GenSpec spec = opt.spec;
      spec.seed = opt.spec.seed + s;
      for (auto& row : bench_run(spec, opt.reps)) rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << "\n";
    return kExitUsage;
  }

  if (opt.csv) {
    out << kBenchCsvHeader << "\n";
    for (const auto& r : rows) {
      out << r.backend << ',' << to_string(r.pattern) << ',' << r.processes << ','
          << r.messages_per_process << ',' << r.n << ',' << std::fixed << std::setprecision(3)
          << r.median_ms << ',' << r.steps << "\n";
    }
    return kExitOk;
  }

  out << std::left << std::setw(8) << "backend" << std::setw(8) << "pattern" << std::right
      << std::setw(6) << "P" << std::setw(9) << "M" << std::setw(10) << "n" << std::setw(12)
      << "median_ms" << std::setw(10) << "steps" << std::setw(10) << "table"
      << "  verdict\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(8) << r.backend << std::setw(8) << to_string(r.pattern)
        << std::right << std::setw(6) << r.processes << std::setw(9) << r.messages_per_process
        << std::setw(10) << r.n << std::setw(12) << std::fixed << std::setprecision(3)
        << r.median_ms << std::setw(10) << r.steps << std::setw(10) << r.peak_table << "  "
        << to_string(r.verdict);
    if (r.backend == "engine") {
      out << (r.steps <= r.n + r.processes ? "  (steps <= n+P)" : "  (steps > n+P!)");
    }
    out << "\n";
  }
  return kExitOk;
}

inline int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    const Model m = generate(opt.spec);
    text = opt.as == GenOptions::As::Dsl ? render_dsl(m) : render_abstract(m);
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return kExitUsage;
  }
  if (opt.out.empty() || opt.out == "-") {
    out << text;
    return kExitOk;
  }
  std::ofstream file(opt.out, std::ios::binary);
  file << text;
  if (!file) {
    err << "gen: cannot write '" << opt.out << "'\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace mqcheck

#endif  // MQCHECK_COMMANDS_HPP
