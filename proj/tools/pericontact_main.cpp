// pericontact: configuration-driven bond-based peridynamics contact solver
// with built-in Hertz validation benchmarks.

#include <cstdio>
#include <filesystem>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "pericontact/bench_cases.hpp"
#include "pericontact/errors.hpp"
#include "pericontact/field_io.hpp"
#include "pericontact/run_config.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kCliError = 1,
  kConfigError = 2,
  kIngestError = 3,
  kAssemblyError = 4,
  kSolveError = 5,
  kReportError = 6,
};

using namespace pericontact;

void print_model_summary(const Model& model) {
  std::size_t particles = 0, bonds = 0, surface = 0, faces = 0;
  for (const auto& b : model.bodies) {
    particles += b.particles.size();
    bonds += b.bonds.total() / 2;
    faces += b.faces.size();
    for (auto s : b.surface.surface) surface += s;
  }
  std::printf("bodies: %zu\n", model.bodies.size());
  for (const auto& b : model.bodies)
    std::printf("  %-12s %s  particles=%zu faces=%zu\n", b.name.c_str(),
                b.deformable() ? "deformable" : "rigid     ", b.particles.size(),
                b.faces.size());
  std::printf("particles: %zu\nbonds: %zu\nsurface particles: %zu\nfaces: %zu\n",
              particles, bonds, surface, faces);
}

int do_run(const std::string& config_path, const std::string& out_override,
           int threads_override, bool dry_run) {
  RunConfig cfg = parse_run_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (threads_override > 0) cfg.threads = threads_override;

#ifdef _OPENMP
  omp_set_num_threads(cfg.threads);
#endif

  Model model = build_model(cfg);
  if (dry_run) {
    print_model_summary(model);
    return kOk;
  }

  std::filesystem::create_directories(cfg.out_dir);
  write_config_echo(cfg, cfg.out_dir + "/config_echo.json");

  OutputCallback cadence;
  if (cfg.solver.output_every > 0) {
    cadence = [&cfg](const Model& m, int step, const std::vector<ContactPair>& pairs) {
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%06d", step);
      for (const auto& b : m.bodies)
        write_fields(b.particles, b.surface,
                     cfg.out_dir + "/fields_" + b.name + suffix + ".csv",
                     FieldFormat::csv);
      if (cfg.diagnostics)
        write_contact_diagnostics(pairs, step, cfg.out_dir + "/contacts.csv",
                                  step > cfg.solver.output_every);
    };
  }

  SolveReport report = run(model, cfg.solver, cadence);

  write_convergence_log(report.history, cfg.out_dir + "/convergence.csv");
  if (cfg.diagnostics && cfg.solver.output_every == 0)
    write_contact_diagnostics(model.contacts(), report.steps,
                              cfg.out_dir + "/contacts.csv", false);
  for (const auto& b : model.bodies) {
    write_fields(b.particles, b.surface,
                 cfg.out_dir + "/fields_" + b.name + "_final.csv", FieldFormat::csv);
    if (cfg.write_vtk)
      write_fields(b.particles, b.surface,
                   cfg.out_dir + "/fields_" + b.name + "_final.vtk",
                   FieldFormat::vtk);
  }

  std::printf("steps: %d\nresidual: %.6g\nconverged: %s\n", report.steps,
              report.residual, report.converged ? "yes" : "no");
  if (cfg.solver.mode == SolveMode::adr && !report.converged) {
    std::fprintf(stderr, "pericontact: ADR did not reach tolerance %.3g\n",
                 cfg.solver.tolerance);
    return kSolveError;
  }
  return kOk;
}

int do_bench(const std::string& case_name, const BenchOptions& opts,
             const std::string& sweep) {
  HertzKind kind;
  if (case_name == "sphere")
    kind = HertzKind::sphere;
  else if (case_name == "roller")
    kind = HertzKind::roller;
  else if (case_name == "punch")
    kind = HertzKind::punch;
  else {
    std::fprintf(stderr, "pericontact: unknown case '%s'\n", case_name.c_str());
    return kCliError;
  }

  if (!sweep.empty()) {
    SweepKind sk;
    if (sweep == "grid")
      sk = SweepKind::grid;
    else if (sweep == "horizon")
      sk = SweepKind::horizon;
    else if (sweep == "dt")
      sk = SweepKind::dt;
    else {
      std::fprintf(stderr, "pericontact: unknown sweep '%s'\n", sweep.c_str());
      return kCliError;
    }
    auto entries = run_sweep(kind, sk, opts);
    std::printf("%-12s %-10s %-10s %-10s %s\n", "parameter", "MRE[%]", "fit_a",
                "balance", "steps");
    for (const auto& e : entries)
      std::printf("%-12g %-10.4g %-10.5g %-10.3g %d%s\n", e.parameter,
                  e.result.mre, e.result.fitted_a, e.result.balance_rel,
                  e.result.steps, e.result.converged ? "" : " (not converged)");
    return kOk;
  }

  BenchResult r = run_bench_case(kind, opts);
  std::printf("case: %s\nparticles: %zu\nsteps: %d\nconverged: %s\n",
              case_name.c_str(), r.particles, r.steps, r.converged ? "yes" : "no");
  std::printf("MRE: %.4g %%\n", r.mre);
  if (r.fitted_a > 0.0)
    std::printf("fitted contact radius: %.5g m (theory %.5g m)\n", r.fitted_a,
                r.reference.contact_radius());
  std::printf("applied: %.6g N, reaction: %.6g N (relative gap %.3g)\n", r.applied,
              r.reaction, r.balance_rel);
  std::printf("report: %s/hertz_report.csv\n", opts.out_dir.c_str());
  return r.converged ? kOk : kSolveError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bond-based peridynamics point-to-surface contact solver"};
  app.require_subcommand(1);

  // run
  std::string config_path, out_override;
  int threads = 0;
  bool dry_run = false;
  auto* run_cmd = app.add_subcommand("run", "solve a configuration file");
  run_cmd->add_option("config", config_path, "run configuration (JSON)")
      ->required();
  run_cmd->add_option("--out", out_override, "override the output directory");
  run_cmd->add_option("--threads", threads, "worker threads");
  run_cmd->add_flag("--dry-run", dry_run,
                    "validate and print the model summary without solving");

  // bench
  std::string case_name, sweep;
  BenchOptions opts;
  auto* bench_cmd =
      app.add_subcommand("bench", "run a Hertz validation case (sphere|roller|punch)");
  bench_cmd->add_option("case", case_name, "sphere, roller, or punch")->required();
  bench_cmd->add_option("--dx", opts.dx, "grid size (m)");
  bench_cmd->add_option("--horizon", opts.horizon_ratio, "horizon ratio m_h");
  bench_cmd->add_option("--dt", opts.dt, "ADR pseudo time step (s)");
  bench_cmd->add_option("--tolerance", opts.tolerance, "ADR residual tolerance");
  bench_cmd->add_option("--max-steps", opts.max_steps, "ADR step limit");
  bench_cmd->add_option("--sweep", sweep, "grid | horizon | dt");
  bench_cmd->add_option("--threads", opts.threads, "worker threads");
  bench_cmd->add_option("--out", opts.out_dir, "output directory");
  bench_cmd->add_flag("--text-loads", opts.text_loads,
                      "use the alternative 8e8 load convention");
  bool bench_dry = false;
  bench_cmd->add_flag("--dry-run", bench_dry,
                      "build the case and print the model summary only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(config_path, out_override, threads, dry_run);
    if (*bench_cmd) {
      if (bench_dry) {
        RunConfig cfg;
        if (case_name == "sphere")
          cfg = sphere_bench_config(opts);
        else if (case_name == "roller")
          cfg = roller_bench_config(opts);
        else if (case_name == "punch")
          cfg = punch_bench_config(opts);
        else {
          std::fprintf(stderr, "pericontact: unknown case '%s'\n",
                       case_name.c_str());
          return kCliError;
        }
        Model model = build_model(cfg);
        print_model_summary(model);
        return kOk;
      }
      return do_bench(case_name, opts, sweep);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "pericontact: config: %s\n", e.what());
    return kConfigError;
  } catch (const IngestError& e) {
    std::fprintf(stderr, "pericontact: ingest: %s\n", e.what());
    return kIngestError;
  } catch (const AssemblyError& e) {
    std::fprintf(stderr, "pericontact: assembly: %s\n", e.what());
    return kAssemblyError;
  } catch (const SolveError& e) {
    std::fprintf(stderr, "pericontact: solve: %s\n", e.what());
    return kSolveError;
  } catch (const ReportError& e) {
    std::fprintf(stderr, "pericontact: report: %s\n", e.what());
    return kReportError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pericontact: %s\n", e.what());
    return kCliError;
  }
  return kCliError;
}
