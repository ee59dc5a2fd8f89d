#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavesys/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wavesys: wave equations <-> symmetric hyperbolic systems with mollified "
               "low-regularity coefficients"};
  app.require_subcommand(1);

  wavesys::cli::RunOptions opt;
  if (const char* env = std::getenv("WAVESYS_OUT_DIR")) opt.out_dir = env;

  std::string spec_arg;
  std::string case_name = "A";

  const auto add_common = [&](CLI::App* cmd, bool needs_spec = true) {
    if (needs_spec)
      cmd->add_option("spec", spec_arg, "spec file path or builtin name")->required();
    cmd->add_option("--out", opt.out_dir, "output directory (or WAVESYS_OUT_DIR)");
    cmd->add_option("--seed", opt.seed, "seed for sampled directions and random suites");
    cmd->add_option("--mollifier", opt.mollifier_override,
                    "override the spec's mollifier rescaling (model|log)");
  };

  CLI::App* c_example = app.add_subcommand("example", "materialize a builtin problem spec");
  c_example->add_option("name", spec_arg, "builtin name, or 'list'")->required();
  c_example->add_option("--out", opt.out_dir, "output directory");

  CLI::App* c_transform =
      app.add_subcommand("transform", "emit the first-order system coefficient tables");
  add_common(c_transform);
  c_transform->add_option("--eps", opt.eps, "regularization parameter");

  CLI::App* c_solve = app.add_subcommand("solve", "solve one form at a fixed epsilon");
  add_common(c_solve);
  c_solve->add_option("--eps", opt.eps, "regularization parameter");
  c_solve->add_option("--form", opt.form, "system | wave");

  CLI::App* c_sweep = app.add_subcommand("sweep", "classify epsilon-growth of nets");
  add_common(c_sweep);
  c_sweep->add_option("--target", opt.target, "coeffs | solution");

  CLI::App* c_verify = app.add_subcommand("verify", "check solvability hypotheses");
  add_common(c_verify);
  c_verify->add_option("--case", case_name, "A | B | C");
  c_verify->add_option("--target", opt.target, "wave | system");

  CLI::App* c_equiv =
      app.add_subcommand("equivalence", "cross-validate the two forms under refinement");
  add_common(c_equiv);
  c_equiv->add_option("--eps", opt.eps, "regularization parameter");
  c_equiv->add_option("--levels", opt.levels, "refinement levels");
  c_equiv->add_option("--order-threshold", opt.order_threshold, "verdict threshold");

  CLI::App* c_gt = app.add_subcommand("gt-pipeline", "metric smoothing workflow");
  add_common(c_gt);
  c_gt->add_flag("--with-solution-sweep", opt.with_solution_sweep,
                 "also classify the solution net over the sweep");

  CLI11_PARSE(app, argc, argv);

  if (c_verify->parsed()) {
    if (case_name == "A") opt.which = wavesys::asymptotics::ConditionCase::A;
    else if (case_name == "B") opt.which = wavesys::asymptotics::ConditionCase::B;
    else if (case_name == "C") opt.which = wavesys::asymptotics::ConditionCase::C;
    else {
      std::cerr << "error = unknown case '" << case_name << "'\nexit = 3\n";
      return 3;
    }
  }

  std::string sub;
  for (CLI::App* cmd : app.get_subcommands()) sub = cmd->get_name();
  return wavesys::cli::run_command(sub, spec_arg, opt, std::cout);
}
