// Command dispatch for the qtoric front end.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qtoric {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,         // model syntax, unknown command, dangling reference, bad arity
  kExitPrecondition = 3,  // includes declared limits
  kExitVerification = 4,
};

struct Invocation {
  std::string command;
  std::vector<std::string> names;
  std::string model_text;
  /// Explicit degree bound and where it came from ("flag" or "env"); when
  /// unset the model's [bounds] degree applies, then 6.
  std::optional<std::size_t> bound;
  std::string bound_source;
  /// Fault injection for exercising the verification path: "witness"
  /// perturbs cohomology witnesses before they are rechecked.
  std::string fault;
};

struct Outcome {
  int exit_code = kExitOk;
  std::string report;  // JSON document, newline-terminated
};

const std::vector<std::string>& command_names();

/// Parses the model, runs the command and renders the report. Never throws
/// for model or domain errors; they become error reports with exit codes.
Outcome execute(const Invocation& inv);

}  // namespace qtoric
