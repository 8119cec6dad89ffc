// qtoric <command> <names...> --model <file> [--bound <d>]
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtoric/run.hpp"

namespace {

std::optional<std::size_t> parse_count(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoull(text));
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted affine semigroup algebras: analyses over a model file"};
  std::string command;
  std::vector<std::string> names;
  std::string model_path;
  std::optional<std::size_t> bound;

  std::string commands;
  for (const auto& c : qtoric::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "one of: " + commands)->required();
  app.add_option("names", names, "model names the command operates on");
  app.add_option("--model,-m", model_path, "model file")->required();
  app.add_option("--bound,-d", bound, "verification degree (default: $QTORIC_BOUND, model, 6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qtoric::kExitParse;
  }

  qtoric::Invocation inv;
  inv.command = command;
  inv.names = names;
  if (bound) {
    inv.bound = bound;
    inv.bound_source = "flag";
  } else if (const char* env = std::getenv("QTORIC_BOUND"); env && *env) {
    inv.bound = parse_count(env);
    if (!inv.bound) {
      std::cerr << "qtoric: QTORIC_BOUND must be a nonnegative integer\n";
      return qtoric::kExitParse;
    }
    inv.bound_source = "env";
  }

  if (const char* fault = std::getenv("QTORIC_FAULT")) inv.fault = fault;

  std::ifstream in(model_path, std::ios::binary);
  if (!in) {
    std::cerr << "qtoric: cannot read model file " << model_path << "\n";
    return qtoric::kExitParse;
  }
  std::ostringstream text;
  text << in.rdbuf();
  inv.model_text = text.str();

  const qtoric::Outcome out = qtoric::execute(inv);
  std::cout << out.report;
  if (out.exit_code != qtoric::kExitOk) std::cerr << "qtoric: command failed (exit " << out.exit_code << ")\n";
  return out.exit_code;
}
