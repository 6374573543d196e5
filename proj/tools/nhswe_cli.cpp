// Command-line front end: run | converge | compare-closures | bed-dump.

#include <CLI11.hpp>
#include <malloc.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "nhswe/runner.hpp"

namespace {

struct Common {
  std::string scenario;
  std::string config_file;
  std::string closure;
  std::string out;
  double dx = 0.0;
  double dt = 0.0;
  double t_end = -1.0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "Scenario preset");
  cmd->add_option("--config", c.config_file, "key=value config file (e.g. a config.resolved)");
  cmd->add_option("--closure", c.closure, "hydrostatic|linear|quad-simple|quad-full");
  cmd->add_option("--dx", c.dx, "Element width [m]");
  cmd->add_option("--dt", c.dt, "Time step [s]");
  cmd->add_option("--tend", c.t_end, "End time [s]");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--set", c.sets, "Override key=value (repeatable)");
}

nhswe::ConfigMap build_config(const Common& c) {
  nhswe::ConfigMap file;
  if (!c.config_file.empty()) file = nhswe::read_config_file(c.config_file);
  std::string scenario = c.scenario;
  if (scenario.empty() && file.count("scenario")) scenario = file.at("scenario");
  if (scenario.empty()) throw nhswe::ConfigError("no scenario given (--scenario or --config)");

  nhswe::ConfigMap cfg =
      scenario == "custom" ? nhswe::default_config() : nhswe::preset(scenario);
  nhswe::apply_overrides(cfg, file);
  for (const std::string& s : c.sets) nhswe::apply_overrides(cfg, nhswe::parse_assignment(s));
  if (!c.closure.empty()) cfg["closure"] = c.closure;
  if (c.dx > 0.0) cfg["dx"] = nhswe::format_number(c.dx);
  if (c.dt > 0.0) cfg["dt"] = nhswe::format_number(c.dt);
  if (c.t_end >= 0.0) cfg["t_end"] = nhswe::format_number(c.t_end);
  return cfg;
}

std::string output_dir(const Common& c, const std::string& tag) {
  if (!c.out.empty()) return c.out;
  const char* root = std::getenv("NHSWE_OUTPUT_ROOT");
  return (std::filesystem::path(root ? root : "output") / tag).string();
}

std::vector<double> parse_times(const std::string& text) {
  nhswe::ConfigMap m = nhswe::default_config();
  m["snapshots"] = text;
  m["t_end"] = "1e300";
  return nhswe::resolve(m).snapshots;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_table(const nhswe::ConvergenceTable& t) {
  std::printf("%-6s %-12s", "level", "dx");
  for (const auto& v : t.variables) std::printf(" %-12s", ("err_" + v).c_str());
  for (const auto& v : t.variables) std::printf(" %-9s", ("order_" + v).c_str());
  std::printf(" note\n");
  for (std::size_t k = 0; k < t.errors.size(); ++k) {
    std::printf("%-6zu %-12.5g", k, t.dx[k]);
    for (double e : t.errors[k]) std::printf(" %-12.5g", e);
    for (double o : t.orders[k]) std::printf(" %-9.3f", o);
    std::printf(" %s\n", t.notes[k].c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  // Keep the per-step band matrices on the heap instead of fresh mmaps.
  mallopt(M_MMAP_THRESHOLD, 64 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);

  CLI::App app{"Depth-averaged non-hydrostatic shallow-water solver with moving bottom"};
  app.require_subcommand(1);

  Common run_opts, conv_opts, cmp_opts, bed_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario and write CSV outputs");
  add_common(run_cmd, run_opts);

  CLI::App* conv_cmd = app.add_subcommand("converge", "Self-convergence study");
  add_common(conv_cmd, conv_opts);
  std::size_t levels = 3;
  conv_cmd->add_option("--levels", levels, "Refinement levels (>= 3)");

  CLI::App* cmp_cmd = app.add_subcommand("compare-closures", "Run several closures and compare");
  add_common(cmp_cmd, cmp_opts);
  std::string closures = "hydrostatic,linear,quad-simple,quad-full";
  std::string cmp_times;
  cmp_cmd->add_option("--closures", closures, "Comma-separated closures");
  cmp_cmd->add_option("--times", cmp_times, "Comma-separated comparison times (default: snapshots)");

  CLI::App* bed_cmd = app.add_subcommand("bed-dump", "Write the bed and its derivatives as CSV");
  add_common(bed_cmd, bed_opts);
  std::string bed_times = "0";
  bed_cmd->add_option("--times", bed_times, "Comma-separated times");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      nhswe::ConfigMap cfg = build_config(run_opts);
      const nhswe::Simulation sim(nhswe::resolve(cfg));
      const std::string dir =
          output_dir(run_opts, cfg.at("scenario") + "-" + cfg.at("closure"));
      const nhswe::RunOutput out = nhswe::run(sim);
      nhswe::write_run(out, cfg, sim, dir);
      const auto& s = out.summary;
      std::printf("%zu steps to t=%g; max|g1+g2|=%.3g min h1=%.3g min h2=%.3g solve residual=%.3g\n",
                  s.steps, out.final.t, s.max_g_sum, s.min_h1, s.min_h2, s.max_solve_residual);
      std::printf("outputs in %s\n", dir.c_str());
    } else if (conv_cmd->parsed()) {
      nhswe::ConvergenceTable table;
      std::string tag;
      if (conv_opts.scenario == "manufactured-elliptic") {
        table = nhswe::manufactured_convergence(levels);
        tag = "converge-manufactured-elliptic";
      } else {
        nhswe::ConfigMap cfg = build_config(conv_opts);
        table = nhswe::self_convergence(cfg, levels);
        tag = "converge-" + cfg.at("scenario");
      }
      print_table(table);
      const std::string dir = output_dir(conv_opts, tag);
      std::filesystem::create_directories(dir);
      nhswe::write_convergence(table, (std::filesystem::path(dir) / "convergence.csv").string());
    } else if (cmp_cmd->parsed()) {
      nhswe::ConfigMap cfg = build_config(cmp_opts);
      nhswe::ConfigMap probe = cfg;
      const nhswe::RunConfig rc = nhswe::resolve(probe);
      const std::vector<double> times = cmp_times.empty() ? rc.snapshots : parse_times(cmp_times);
      const nhswe::ClosureComparison cmp = nhswe::compare_closures(cfg, split(closures), times);
      const std::string dir = output_dir(cmp_opts, "compare-" + cfg.at("scenario"));
      const nhswe::Simulation sim(rc);
      nhswe::write_comparison(cmp, sim.mesh(), dir);
      std::printf("%-8s %-12s %-12s %-12s %-12s\n", "t", "closure_a", "closure_b", "l2_eta",
                  "l2_hu");
      for (const auto& d : cmp.differences) {
        std::printf("%-8.4g %-12s %-12s %-12.5g %-12.5g\n", d.t, d.a.c_str(), d.b.c_str(),
                    d.l2_eta, d.l2_hu);
      }
      std::printf("outputs in %s\n", dir.c_str());
    } else if (bed_cmd->parsed()) {
      nhswe::ConfigMap cfg = build_config(bed_opts);
      const nhswe::Simulation sim(nhswe::resolve(cfg));
      std::string path = bed_opts.out;
      if (path.empty()) {
        const std::string dir = output_dir(bed_opts, "bed-" + cfg.at("scenario"));
        std::filesystem::create_directories(dir);
        path = (std::filesystem::path(dir) / "bed.csv").string();
      }
      nhswe::write_bed_dump(sim, parse_times(bed_times), path);
      std::printf("wrote %s\n", path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
