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

// mqcheck: static deadlock checker for sequential rendezvous models.
//
// Exit codes: 0 ok, 1 usage/parse/protocol error, 2 deadlock, 3 illegal
// model, 4 oracle state cap exceeded.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mqcheck/commands.hpp"

namespace {

using namespace mqcheck;

const std::map<std::string, Format> kFormats{{"text", Format::Text}, {"json", Format::Json}};
const std::map<std::string, InputMode> kModes{
    {"auto", InputMode::Auto}, {"strict", InputMode::Strict}, {"abstract", InputMode::Abstract}};

void add_gen_flags(CLI::App* cmd, GenSpec& spec, std::string& pattern) {
  cmd->add_option("--pattern", pattern, "pairs | ring | random")
      ->check(CLI::IsMember({"pairs", "ring", "random"}));
  cmd->add_option("-P,--processes", spec.processes, "Number of processes");
  cmd->add_option("-M,--messages", spec.messages_per_process,
                  "Messages per process (rounds for ring)");
  cmd->add_option("--window", spec.shuffle_window, "Shuffle window for the random pattern");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static deadlock checker for sequential synchronous message-passing models"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* c = app.add_subcommand("check", "Check a model file for deadlock");
  c->add_option("path", check.path, "Model file ('-' for stdin)")->required();
  c->add_option("--format", check.format, "text | json")
      ->transform(CLI::CheckedTransformer(kFormats));
  c->add_option("--mode", check.mode, "auto | strict | abstract")
      ->transform(CLI::CheckedTransformer(kModes));
  c->add_flag("--validate-only", check.validate_only, "Only run static legality checks");

  StreamOptions stream;
  auto* s = app.add_subcommand("stream", "Check an append/close event stream read from stdin");
  s->add_option("--format", stream.format, "text | json")
      ->transform(CLI::CheckedTransformer(kFormats));
  s->add_option("--mode", stream.mode, "auto | strict | abstract")
      ->transform(CLI::CheckedTransformer(kModes));

  OracleOptions oracle;
  std::string backend = "cycle";
  auto* o = app.add_subcommand("oracle", "Run a reference backend");
  o->add_option("path", oracle.path, "Model file ('-' for stdin)")->required();
  o->add_option("--backend", backend, "simulate | cycle")
      ->check(CLI::IsMember({"simulate", "cycle"}));
  o->add_option("--cap", oracle.cap, "State limit for the simulator");
  o->add_option("--format", oracle.format, "text | json")
      ->transform(CLI::CheckedTransformer(kFormats));
  o->add_option("--mode", oracle.mode, "auto | strict | abstract")
      ->transform(CLI::CheckedTransformer(kModes));

  BenchOptions bench;
  std::string bench_pattern = "pairs";
  auto* b = app.add_subcommand("bench", "Time the engine against cycle detection");
  add_gen_flags(b, bench.spec, bench_pattern);
  b->add_option("--seed", bench.spec.seed, "First seed");
  b->add_option("--seeds", bench.seeds, "Number of consecutive seeds");
  b->add_option("--reps", bench.reps, "Timed repetitions per backend (median reported)");
  b->add_flag("--csv", bench.csv, "Emit CSV");

  GenOptions gen;
  std::string gen_pattern = "pairs";
  std::string gen_format = "dsl";
  auto* g = app.add_subcommand("gen", "Write a generated model");
  add_gen_flags(g, gen.spec, gen_pattern);
  g->add_option("--seed", gen.spec.seed, "Random seed");
  g->add_option("--out", gen.out, "Output path (default stdout)");
  g->add_option("--format", gen_format, "dsl | abstract")
      ->check(CLI::IsMember({"dsl", "abstract"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (c->parsed()) return cmd_check(check, std::cout, std::cerr);
  if (s->parsed()) return cmd_stream(std::cin, stream, std::cout, std::cerr);
  if (o->parsed()) {
    oracle.backend = backend == "simulate" ? OracleOptions::Backend::Simulate
                                           : OracleOptions::Backend::Cycle;
    return cmd_oracle(oracle, std::cout, std::cerr);
  }
  if (b->parsed()) {
    bench.spec.pattern = *pattern_from_string(bench_pattern);
    return cmd_bench(bench, std::cout, std::cerr);
  }
  if (g->parsed()) {
    gen.spec.pattern = *pattern_from_string(gen_pattern);
    gen.as = gen_format == "abstract" ? GenOptions::As::Abstract : GenOptions::As::Dsl;
    return cmd_gen(gen, std::cout, std::cerr);
  }
  return kExitUsage;
}
