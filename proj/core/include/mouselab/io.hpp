#pragma once
#include <string>

#include "mouselab/bench.hpp"
#include "mouselab/demos.hpp"
#include "mouselab/dsl.hpp"
#include "mouselab/flow.hpp"
#include "mouselab/interpret.hpp"
#include "mouselab/lpp.hpp"

namespace mouselab {

// All files are JSON (stable key order) so identical inputs produce
// byte-identical outputs.

void write_demos_file(const std::string& path, const DemonstrationSet& demos,
                      const EnvironmentSpec& env);
DemonstrationSet read_demos_file(const std::string& path, EnvironmentSpec& env_out);

void write_formula_file(const std::string& path, const Formula& formula,
                        const PredicateSet& preds, const EnvironmentSpec& env);
// Throws when the stored grammar fingerprint does not match `preds`.
Formula read_formula_file(const std::string& path, const PredicateSet& preds);
// Environment kind recorded in a formula file.
EnvKind read_formula_env(const std::string& path);

void write_grammar_file(const std::string& path, const GrammarConfig& config);
GrammarConfig read_grammar_file(const std::string& path);

std::string interpret_report_text(const InterpretResult& result,
                                  const InterpretConfig& config,
                                  const PredicateSet& preds,
                                  const EnvironmentSpec& env,
                                  const std::string& method);

std::string bench_report_text(const BenchmarkReport& report);

// Suite config file: JSON {cells:[{env,x}...], methods:[...], clusters:{...}}.
SuiteConfig read_suite_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mouselab
