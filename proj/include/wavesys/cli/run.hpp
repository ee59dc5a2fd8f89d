#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "wavesys/asymptotics/conditions.hpp"
#include "wavesys/cli/problem_spec.hpp"

namespace wavesys::cli {

// Exit codes of the tool: 0 success / verdict pass, 1 verdict failure,
// 2 numerical blow-up, 3 input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitBlowUp = 2;
inline constexpr int kExitInputError = 3;

struct RunOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  double eps = 1.0 / 64;          // transform / solve
  std::string form = "system";    // solve: system | wave
  std::string target = "coeffs";  // sweep: coeffs | solution; verify: wave | system
  asymptotics::ConditionCase which = asymptotics::ConditionCase::A;
  int levels = 3;                  // equivalence refinement ladder
  double order_threshold = 1.9;    // equivalence verdict
  bool with_solution_sweep = false;  // gt-pipeline: also run the moderateness sweep
  std::string mollifier_override;    // "", "model" or "log"
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> files;
  int exit_code = kExitOk;

  void add(const std::string& key, const std::string& value) { entries.push_back({key, value}); }
  void add(const std::string& key, double value);
  void add_file(const std::string& path) { files.push_back(path); }
  void write(std::ostream& os) const;
};

RunReport run_example(const std::string& name, const RunOptions& opt);
RunReport run_transform(const BuiltProblem& built, const RunOptions& opt);
RunReport run_solve(const BuiltProblem& built, const RunOptions& opt);
RunReport run_sweep(const BuiltProblem& built, const RunOptions& opt);
RunReport run_verify(const BuiltProblem& built, const RunOptions& opt);
RunReport run_equivalence(const BuiltProblem& built, const RunOptions& opt);
RunReport run_gt(const BuiltProblem& built, const RunOptions& opt);

// Loads the spec (file path or builtin name), dispatches the subcommand and
// maps exceptions to exit codes. The report is printed to `out`.
int run_command(const std::string& subcommand, const std::string& spec_arg,
                const RunOptions& opt, std::ostream& out);

}  // namespace wavesys::cli
