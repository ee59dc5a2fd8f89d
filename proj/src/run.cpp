#include "wavesys/cli/run.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavesys/cli/builtins.hpp"
#include "wavesys/linalg/eig.hpp"

namespace wavesys::cli {

namespace fs = std::filesystem;
using genfunc::CoefficientNet;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string out_path(const RunOptions& opt, const std::string& file) {
  fs::create_directories(opt.out_dir);
  return (fs::path(opt.out_dir) / file).string();
}

std::string spec_stem(const std::string& spec_arg) {
  const std::string stem = fs::path(spec_arg).stem().string();
  return stem.empty() ? "problem" : stem;
}

// Coefficient tables share the solution-table layout: a metadata header,
// then one row per grid point.
void write_net_table(std::ostream& os, const CoefficientNet& net, double eps,
                     const SampleGrid& grid, const std::string& name) {
  const auto table = net.sample(eps, grid);
  os << "# wavesys-table n=" << grid.space.n << " box=" << grid.space.str()
     << " tcells=" << grid.tcells << " eps=" << eps << " field=" << name
     << " shape=" << net.rows() << "x" << net.cols() << "\n";
  os << "t";
  for (int a = 0; a < grid.space.n; ++a) os << " x" << a + 1;
  for (int r = 0; r < net.rows(); ++r)
    for (int c = 0; c < net.cols(); ++c) os << " " << name << r + 1 << c + 1;
  os << "\n";
  const std::int64_t spts = grid.spatial_points();
  for (int it = 0; it < grid.tpoints(); ++it) {
    std::array<int, 3> ix{};
    for (std::int64_t p = 0; p < spts; ++p) {
      os << fmt(grid.t(it));
      for (int a = 0; a < grid.space.n; ++a) os << " " << fmt(grid.x(a, ix[a]));
      for (int k = 0; k < table->entries(); ++k)
        os << " " << fmt(table->data[(it * spts + p) * table->entries() + k]);
      os << "\n";
      for (int a = grid.space.n - 1; a >= 0; --a) {
        if (++ix[a] <= grid.cells[a]) break;
        ix[a] = 0;
      }
    }
  }
}

solver::Grid grid_from_spec(const BuiltProblem& built, double lambda_max) {
  return solver::make_grid(built.problem.domain, built.grid.cells, built.problem.horizon,
                           lambda_max, built.grid.cfl, built.grid.boundary);
}

void add_condition_report(RunReport& rep, const asymptotics::ConditionReport& cond) {
  rep.add("case", asymptotics::condition_case_name(cond.which));
  rep.add("target", cond.target);
  for (const auto& h : cond.hypotheses) {
    std::string detail = h.pass ? "pass" : "fail";
    for (const auto& r : h.reports)
      detail += " [" + asymptotics::growth_class_name(r.classification) +
                ", p=" + fmt(r.exponent) + "]";
    rep.add("hypothesis." + h.name, detail);
  }
  rep.add("aggregate", cond.aggregate ? "pass" : "fail");
}

}  // namespace

void RunReport::add(const std::string& key, double value) { entries.push_back({key, fmt(value)}); }

void RunReport::write(std::ostream& os) const {
  for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
  for (const auto& f : files) os << "file = " << f << "\n";
  os << "exit = " << exit_code << "\n";
}

RunReport run_example(const std::string& name, const RunOptions& opt) {
  RunReport rep;
  const auto& specs = builtin_specs();
  if (name == "list" || name.empty()) {
    std::string all;
    for (const auto& [k, v] : specs) all += (all.empty() ? "" : " ") + k;
    rep.add("builtins", all);
    return rep;
  }
  const auto it = specs.find(name);
  if (it == specs.end()) throw ConfigError("unknown builtin '" + name + "'");
  const std::string path = out_path(opt, name + ".spec");
  std::ofstream f(path);
  f << it->second;
  if (!f) throw ConfigError("cannot write " + path);
  rep.add("builtin", name);
  rep.add_file(path);
  return rep;
}

RunReport run_transform(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  rep.add("eps", opt.eps);
  const transform::HyperbolicSystem sys = wave_to_system(built.problem);

  std::array<int, 3> cells{1, 1, 1};
  for (int a = 0; a < built.problem.n; ++a) cells[a] = 32;
  const SampleGrid grid = SampleGrid::spacetime(built.problem.domain, cells, 0.0,
                                                built.problem.horizon, 4);
  const SampleGrid spatial = SampleGrid::spatial(built.problem.domain, cells, 0.0);

  const auto emit = [&](const CoefficientNet& net, const std::string& label,
                        const SampleGrid& g) {
    const std::string path = out_path(opt, built.name + "_" + label + ".table");
    std::ofstream f(path);
    write_net_table(f, net, opt.eps, g, label);
    rep.add_file(path);
  };
  for (int i = 0; i < built.problem.n; ++i)
    emit(sys.A[i], "A" + std::to_string(i + 1), grid);
  emit(sys.B, "B", grid);
  emit(sys.F, "F", grid);
  emit(sys.w0, "w0", spatial);

  // Round-trip diagnostics on the emitted system.
  const transform::SystemToWaveResult back = transform::system_to_wave(sys);
  rep.add("structure_residual", back.structure_residual);
  rep.add("w0_residual", back.w0_residual);
  rep.add("lower_block_residual", back.lower_block_residual);
  return rep;
}

RunReport run_solve(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  rep.add("eps", opt.eps);
  rep.add("form", opt.form);
  const Stopwatch watch;

  solver::SolveOptions sopt;
  sopt.seed = opt.seed;

  solver::GridSolution sol;
  std::vector<std::string> fields;
  if (opt.form == "wave") {
    const double lam = solver::estimate_lambda_max(
        built.problem, opt.eps, grid_from_spec(built, 1.0), opt.seed);
    const solver::Grid grid = grid_from_spec(built, lam);
    sol = solver::solve_wave(built.problem, grid, opt.eps, sopt);
    fields = {"u"};
  } else if (opt.form == "system") {
    const transform::HyperbolicSystem sys = wave_to_system(built.problem);
    const double lam =
        solver::estimate_lambda_max(sys, opt.eps, grid_from_spec(built, 1.0), opt.seed);
    const solver::Grid grid = grid_from_spec(built, lam);
    sol = solver::solve_system(sys, grid, opt.eps, sopt);
    fields = {"u", "z"};
    for (int i = 0; i < built.problem.n; ++i) fields.push_back("v" + std::to_string(i + 1));
  } else {
    throw ConfigError("solve: form must be 'system' or 'wave'");
  }

  const std::string path = out_path(opt, built.name + "_" + opt.form + "_solution.table");
  std::ofstream f(path);
  write_solution_table(f, sol, fields);
  rep.add_file(path);
  rep.add("lambda_max", sol.diag.lambda_max);
  rep.add("cfl_number", sol.diag.cfl_number);
  rep.add("steps", static_cast<double>(sol.diag.steps));
  rep.add("tau", sol.grid.tau);
  rep.add("residual", sol.residual);
  rep.add("max_value", sol.diag.max_value);
  rep.add("runtime_s", watch.seconds());
  return rep;
}

RunReport run_sweep(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  const Stopwatch watch;
  const transform::WaveProblem& p = built.problem;

  if (opt.target == "solution") {
    asymptotics::ModeratenessOptions mopt;
    mopt.cells = built.grid.cells;
    mopt.boundary = built.grid.boundary;
    mopt.cfl_safety = built.grid.cfl;
    mopt.solve.seed = opt.seed;
    const asymptotics::ModeratenessReport mrep =
        asymptotics::solution_moderateness(p, mopt, built.sweep);

    const std::string path = out_path(opt, built.name + "_solution_sweep.csv");
    std::ofstream f(path);
    asymptotics::write_sweep_csv(f, mrep.sweep);
    rep.add_file(path);
    rep.add("classification", asymptotics::growth_class_name(mrep.sweep.classification));
    rep.add("exponent", mrep.sweep.exponent);
    rep.add("exponent_shift", mrep.exponent_shift);
    rep.add("refine_ok", mrep.refine_ok ? "yes" : "no");
    if (!mrep.perturb_discrepancy.empty()) {
      const std::string ppath = out_path(opt, built.name + "_perturbation.csv");
      std::ofstream pf(ppath);
      pf << "epsilon,discrepancy\n";
      for (size_t i = 0; i < mrep.eps.size(); ++i)
        pf << fmt(mrep.eps[i]) << "," << fmt(mrep.perturb_discrepancy[i]) << "\n";
      rep.add_file(ppath);
      rep.add("perturb_decay_order", mrep.perturb_decay_order);
    }
    if (mrep.solver_failed) rep.add("solver_failed", "yes");
    rep.add("runtime_s", watch.seconds());
    return rep;
  }
  if (opt.target != "coeffs") throw ConfigError("sweep: target must be 'coeffs' or 'solution'");

  const CoefficientNet S = genfunc::net_transform(
      p.R,
      [](const Mat& m) {
        return linalg::spd_sqrt(linalg::SymMatrix::from_mat(m, 1e-8)).to_mat();
      },
      p.n, p.n, "S");
  std::vector<std::pair<std::string, CoefficientNet>> nets{
      {"R", p.R}, {"S", S}, {"g", p.g}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"f", p.f}};
  for (int a = 1; a <= p.n; ++a)
    nets.push_back({"dS_x" + std::to_string(a), genfunc::net_derivative(S, a)});

  for (const auto& [label, net] : nets) {
    const asymptotics::SweepReport srep = asymptotics::classify_net(net, built.sweep);
    const std::string path = out_path(opt, built.name + "_sweep_" + label + ".csv");
    std::ofstream f(path);
    asymptotics::write_sweep_csv(f, srep);
    rep.add_file(path);
    rep.add("class." + label, asymptotics::growth_class_name(srep.classification) +
                                  " p=" + fmt(srep.exponent));
  }
  rep.add("runtime_s", watch.seconds());
  return rep;
}

RunReport run_verify(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  const Stopwatch watch;
  asymptotics::ConditionReport cond;
  if (opt.target == "system") {
    cond = asymptotics::verify_system_conditions(wave_to_system(built.problem), opt.which,
                                                 built.sweep);
  } else {
    cond = asymptotics::verify_wave_conditions(built.problem, opt.which, built.sweep);
  }
  add_condition_report(rep, cond);

  const std::string stem = built.name + "_verify_" + asymptotics::condition_case_name(opt.which);
  const std::string path = out_path(opt, stem + ".txt");
  std::ofstream f(path);
  cond.write(f);
  rep.add_file(path);

  // Per-epsilon values of every hypothesis sweep, in the fixed CSV layout.
  const std::string csv_path = out_path(opt, stem + ".csv");
  {
    std::ofstream cf(csv_path);
    cf << "epsilon,norm_kind,K_id,value\n";
    char buf[64];
    for (const auto& h : cond.hypotheses)
      for (const auto& r : h.reports)
        for (const auto& s : r.series)
          for (size_t i = 0; i < r.eps.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", r.eps[i]);
            cf << buf << "," << s.norm_kind << "," << h.name << "." << r.label << "." << s.k_id
               << ",";
            std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
            cf << buf << "\n";
          }
  }
  rep.add_file(csv_path);
  rep.add("runtime_s", watch.seconds());
  rep.exit_code = cond.aggregate ? kExitOk : kExitVerdictFail;
  return rep;
}

RunReport run_equivalence(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  rep.add("eps", opt.eps);
  const Stopwatch watch;

  solver::SolveOptions sopt;
  sopt.seed = opt.seed;
  const solver::Grid finest = grid_from_spec(built, 1.0);
  const solver::EquivalenceReport eq =
      solver::equivalence_check(built.problem, finest, opt.eps, opt.levels, sopt);

  const std::string path = out_path(opt, built.name + "_equivalence.csv");
  std::ofstream f(path);
  f << "h,u_discrepancy,w_residual\n";
  for (size_t i = 0; i < eq.hs.size(); ++i)
    f << fmt(eq.hs[i]) << "," << fmt(eq.u_discrepancy[i]) << "," << fmt(eq.w_residual[i]) << "\n";
  rep.add_file(path);

  rep.add("levels", static_cast<double>(opt.levels));
  rep.add("u_order", eq.u_order);
  rep.add("w_order", eq.w_order);
  rep.add("u_discrepancy_finest", eq.u_discrepancy.back());
  rep.add("w_residual_finest", eq.w_residual.back());
  rep.add("runtime_s", watch.seconds());
  rep.exit_code = (eq.u_order >= opt.order_threshold && eq.w_order >= opt.order_threshold)
                      ? kExitOk
                      : kExitVerdictFail;
  return rep;
}

RunReport run_gt(const BuiltProblem& built, const RunOptions& opt) {
  RunReport rep;
  rep.add("seed", static_cast<double>(opt.seed));
  const Stopwatch watch;

  asymptotics::GtOptions gopt;
  gopt.mode = opt.mollifier_override == "model" ? genfunc::MollifierMode::Model
              : opt.mollifier_override == "log" ? genfunc::MollifierMode::Log
                                                : genfunc::MollifierMode::Log;
  gopt.u0 = built.problem.u0;
  gopt.u1 = built.problem.u1;
  const asymptotics::GtResult gt = asymptotics::geroch_traschen_pipeline(
      built.raw_R, built.problem.n, built.problem.domain, built.problem.horizon, built.sweep,
      gopt);
  rep.add("raw_min_eig", gt.raw_min_eig);
  rep.add("raw_max_eig", gt.raw_max_eig);
  rep.add("raw_min_det", gt.raw_min_det);
  add_condition_report(rep, gt.report);

  const std::string path = out_path(opt, built.name + "_gt_verify.txt");
  {
    std::ofstream f(path);
    gt.report.write(f);
  }
  rep.add_file(path);
  bool pass = gt.report.aggregate;

  if (opt.with_solution_sweep) {
    asymptotics::ModeratenessOptions mopt;
    mopt.cells = built.grid.cells;
    mopt.boundary = built.grid.boundary;
    mopt.cfl_safety = built.grid.cfl;
    mopt.solve.seed = opt.seed;
    const asymptotics::ModeratenessReport mrep =
        asymptotics::solution_moderateness(gt.problem, mopt, built.sweep);
    const std::string spath = out_path(opt, built.name + "_gt_solution_sweep.csv");
    std::ofstream sf(spath);
    asymptotics::write_sweep_csv(sf, mrep.sweep);
    rep.add_file(spath);
    rep.add("solution_class", asymptotics::growth_class_name(mrep.sweep.classification));
    rep.add("solution_exponent", mrep.sweep.exponent);
    rep.add("exponent_shift", mrep.exponent_shift);
    rep.add("refine_ok", mrep.refine_ok ? "yes" : "no");
    pass = pass && mrep.refine_ok && mrep.sweep.exponent <= 0.1 &&
           mrep.sweep.passes_log_type();
  }

  rep.add("runtime_s", watch.seconds());
  rep.exit_code = pass ? kExitOk : kExitVerdictFail;
  return rep;
}

int run_command(const std::string& subcommand, const std::string& spec_arg,
                const RunOptions& opt, std::ostream& out) {
  RunReport rep;
  try {
    if (subcommand == "example") {
      rep = run_example(spec_arg, opt);
    } else {
      std::string text;
      const auto& builtins = builtin_specs();
      if (auto it = builtins.find(spec_arg); it != builtins.end() && !fs::exists(spec_arg)) {
        text = it->second;
      } else {
        std::ifstream f(spec_arg);
        if (!f) throw ConfigError("cannot open spec '" + spec_arg + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
      }
      ProblemSpec spec = parse_spec(text);
      if (!opt.mollifier_override.empty()) {
        if (opt.mollifier_override != "model" && opt.mollifier_override != "log")
          throw ConfigError("mollifier override must be 'model' or 'log'");
        spec.mollifier_mode = opt.mollifier_override == "model" ? genfunc::MollifierMode::Model
                                                                : genfunc::MollifierMode::Log;
      }
      const BuiltProblem built = build_problem(spec);

      if (subcommand == "transform") rep = run_transform(built, opt);
      else if (subcommand == "solve") rep = run_solve(built, opt);
      else if (subcommand == "sweep") rep = run_sweep(built, opt);
      else if (subcommand == "verify") rep = run_verify(built, opt);
      else if (subcommand == "equivalence") rep = run_equivalence(built, opt);
      else if (subcommand == "gt-pipeline") rep = run_gt(built, opt);
      else throw ConfigError("unknown subcommand '" + subcommand + "'");
    }
  } catch (const CflError& e) {
    out << "error = " << e.what() << "\nexit = " << kExitBlowUp << "\n";
    return kExitBlowUp;
  } catch (const BlowUpError& e) {
    out << "error = " << e.what() << "\nexit = " << kExitBlowUp << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    out << "error = " << e.what() << "\nexit = " << kExitInputError << "\n";
    return kExitInputError;
  }

  // The report file itself is part of the emitted set.
  if (subcommand != "example") {
    const std::string rpath =
        out_path(opt, spec_stem(spec_arg) + "_" + subcommand + "_report.txt");
    std::ofstream rf(rpath);
    rep.add_file(rpath);
    rep.write(rf);
  }
  rep.write(out);
  return rep.exit_code;
}

}  // namespace wavesys::cli
