#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dioph::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kOtherError = 1,
  kInvalidConfig = 2,
  kCostGuard = 3,
  kVerificationFailure = 4,
  kIndeterminate = 5,
};

struct RunConfig {
  std::string command;  // construct, estimate, verify, variety

  std::string plan_path;
  std::vector<std::string> source_paths;
  std::string poly_path;
  std::vector<std::string> artifact_paths;  // verify inputs

  std::string exponent = "omega";  // lambda1, lambda, omega, chi, uniform_chi
  unsigned veronese = 0;
  std::string x_max = "10000";
  std::string ratio = "2";
  std::size_t depth = 0;  // 0 keeps the plan's depth (construct) or 8 (profile)
  std::string method = "both";

  std::string mu;
  std::vector<std::string> box;
  std::string mode = "shared";
  std::string height = "20";
  std::string radius = "0";

  unsigned precision = 0;  // 0 uses the environment default
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
};

// Parses argv; throws CLI::ParseError subclasses on malformed input.
RunConfig parse_args(int argc, const char* const* argv);

// Executes one command, writing artifacts and manifest.json under cfg.out.
// Returns an ExitCode and reports diagnostics to err.
int run(const RunConfig& cfg, std::ostream& err);

// parse_args + run with the error mapping of the command-line tool.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dioph::cli
