#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "nhswe/runner.hpp"

using namespace nhswe;
namespace fs = std::filesystem;

namespace {

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nhswe_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ConfigMap with(ConfigMap base, const ConfigMap& overrides) {
  apply_overrides(base, overrides);
  return base;
}

}  // namespace

TEST(Config, ParseAndFormat) {
  const ConfigMap m = parse_config("# header\n dt = 0.01 \n\nclosure=linear # trailing\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at("dt"), "0.01");
  EXPECT_EQ(m.at("closure"), "linear");
  EXPECT_EQ(parse_config(format_config(m)), m);
  EXPECT_THROW(parse_config("dt 0.01\n"), ConfigError);
  EXPECT_THROW(parse_config("=3\n"), ConfigError);
  EXPECT_EQ(parse_assignment("tau_p=2").at("tau_p"), "2");
  EXPECT_THROW(parse_assignment("tau_p"), ConfigError);
}

TEST(Config, UnknownKeyListsValidKeys) {
  ConfigMap m = default_config();
  try {
    apply_overrides(m, {{"dtt", "1"}});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("dtt"), std::string::npos);
    EXPECT_NE(what.find("closure"), std::string::npos);
  }
  EXPECT_THROW(preset("hammack-sideways"), ConfigError);
}

TEST(Config, InvalidValues) {
  auto bad = [](const ConfigMap& o) {
    ConfigMap m = with(preset("standing-wave"), o);
    return [m]() mutable { resolve(m); };
  };
  EXPECT_THROW(bad({{"dt", "-1"}})(), ConfigError);
  EXPECT_THROW(bad({{"dt", "abc"}})(), ConfigError);
  EXPECT_THROW(bad({{"closure", "cubic"}})(), std::exception);
  EXPECT_THROW(bad({{"boundary_left", "open"}})(), ConfigError);
  EXPECT_THROW(bad({{"gauges", "100"}})(), ConfigError);
  EXPECT_THROW(bad({{"log_stride", "0"}})(), ConfigError);
}

TEST(Config, WhittakerPreset) {
  ConfigMap m = preset("whittaker-18");
  const RunConfig r = resolve(m);
  const auto& w = std::get<WhittakerBed>(r.shape);
  EXPECT_EQ(w.a0, 1.5);
  EXPECT_EQ(w.u_t, 0.491);
  EXPECT_EQ(w.t1, 0.327);
  EXPECT_EQ(w.t2, 2.327);
  EXPECT_EQ(w.t3, 2.654);
  EXPECT_NEAR(w.u_t / std::sqrt(9.81 * w.h0), 0.375, 1e-3);
  // Snapshot at 8 nondimensional time units on a 0.5 m length scale.
  ASSERT_EQ(r.snapshots.size(), 1u);
  EXPECT_NEAR(r.snapshots[0], 8.0 / std::sqrt(9.81 / 0.5), 1e-3);
}

TEST(Config, HammackAndLynettPresets) {
  ConfigMap h = preset("hammack-up");
  const RunConfig rh = resolve(h);
  EXPECT_EQ(rh.gauges, (std::vector<double>{0.61, 1.61, 9.61, 20.61}));
  EXPECT_GT(std::get<HammackBed>(rh.shape).zeta0, 0.0);
  ConfigMap hd = preset("hammack-down");
  EXPECT_LT(std::get<HammackBed>(resolve(hd).shape).zeta0, 0.0);

  ConfigMap l = preset("lynett");
  const RunConfig rl = resolve(l);
  EXPECT_EQ(rl.snapshots, (std::vector<double>{1.51, 3.00, 4.51, 5.86}));
  EXPECT_EQ(rl.boundary.left, BoundaryKind::Wall);
  EXPECT_EQ(rl.boundary.right, BoundaryKind::Sponge);
}

TEST(Config, ResolveAutoValues) {
  ConfigMap m = preset("hammack-up");
  const RunConfig r = resolve(m);
  for (const auto& [k, v] : m) EXPECT_NE(v, "auto") << k;
  EXPECT_DOUBLE_EQ(r.predictor.sponge_sigma0, 2.0 / r.dt);
  EXPECT_EQ(r.stepper.nh_min_depth, r.predictor.h_min);
  const auto& hb = std::get<HammackBed>(r.shape);
  EXPECT_DOUBLE_EQ(hb.ramp_width, 2.0 * r.dx);
  EXPECT_DOUBLE_EQ(hb.alpha, hammack_alpha(true, hb.h0, hb.b, 9.81));
  EXPECT_EQ(r.elements(), 1264u);
  EXPECT_EQ(r.steps(), 35000u);
}

TEST(Config, ResolvedMapRoundTrip) {
  ConfigMap m = preset("lynett");
  resolve(m);
  ConfigMap again = parse_config(format_config(m));
  EXPECT_EQ(again, m);
  ConfigMap third = again;
  resolve(third);
  EXPECT_EQ(third, m);
}

TEST(Run, OutputFiles) {
  ConfigMap m = with(preset("lynett"), {{"t_end", "0.05"}, {"snapshots", "0,0.05,9"}});
  const RunConfig rc = resolve(m);
  const Simulation sim(rc);
  const RunOutput out = run(sim);
  EXPECT_EQ(out.summary.steps, 10u);
  EXPECT_EQ(out.snapshots.size(), 2u);  // t = 9 lies beyond t_end

  const fs::path dir = scratch_dir("output");
  write_run(out, m, sim, dir.string());
  EXPECT_EQ(first_line(dir / "gauges.csv"), "t,eta_g1,eta_g2,eta_g3,eta_g4");
  EXPECT_EQ(first_line(dir / "runlog.csv"), "step,t,mass,max_u,max_p,cfl");
  EXPECT_EQ(first_line(dir / "snapshots" / snapshot_name(0.05)), "x,h,hu,hw,p,d,eta");
  EXPECT_TRUE(fs::exists(dir / "snapshots" / snapshot_name(0.0)));
  EXPECT_EQ(read_config_file((dir / "config.resolved").string()), m);
  fs::remove_all(dir);
}

TEST(Run, ResolvedConfigReproducesRun) {
  ConfigMap m = with(preset("whittaker-12"), {{"t_end", "0.1"}});
  const RunOutput a = run(resolve(m));
  ConfigMap again = parse_config(format_config(m));
  const RunOutput b = run(resolve(again));
  EXPECT_EQ(a.final.state.h, b.final.state.h);
  EXPECT_EQ(a.final.state.hu, b.final.state.hu);
  EXPECT_EQ(a.final.state.hw, b.final.state.hw);
  EXPECT_EQ(a.gauges.eta, b.gauges.eta);
}

TEST(Run, CflViolationReportsStep) {
  ConfigMap m = with(preset("standing-wave"), {{"dt", "0.5"}});
  try {
    run(resolve(m));
    FAIL() << "expected RunError";
  } catch (const RunError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(Run, StillWaterGaugesReadZero) {
  ConfigMap m = with(preset("lake-at-rest"), {{"t_end", "0.5"}});
  const RunOutput out = run(resolve(m));
  // The gauge at x = 0 is on dry land and reads the ground elevation.
  for (std::size_t g = 0; g < out.gauges.positions.size(); ++g) {
    if (out.gauges.positions[g] <= 0.0) continue;
    for (double v : out.gauges.eta[g]) EXPECT_LT(std::abs(v), 1e-12);
  }
  EXPECT_LT(max_velocity(out.final.state, 1e-6), 1e-12);
}

TEST(CompareClosures, SameClosureTwiceIsIdentical) {
  const ConfigMap base = with(preset("whittaker-12"), {{"t_end", "0.2"}});
  const ClosureComparison c = compare_closures(base, {"quad-full", "quad-full"}, {0.1, 0.2});
  ASSERT_EQ(c.differences.size(), 2u);
  for (const ClosureDifference& d : c.differences) {
    EXPECT_EQ(d.l2_eta, 0.0);
    EXPECT_EQ(d.l2_hu, 0.0);
  }
}

TEST(CompareClosures, FlatBedQuadraticClosuresAgree) {
  const ConfigMap base = with(preset("standing-wave"), {{"t_end", "1"}});
  const ClosureComparison c = compare_closures(base, {"quad-simple", "quad-full"}, {1.0});
  ASSERT_EQ(c.differences.size(), 1u);
  EXPECT_LT(c.differences[0].l2_eta, 1e-12);
  EXPECT_LT(c.differences[0].l2_hu, 1e-12);
}

TEST(Convergence, LakeAtRestIsRoundOff) {
  const ConfigMap base = with(preset("lake-at-rest"), {{"t_end", "0.2"}});
  const ConvergenceTable t = self_convergence(base, 3);
  ASSERT_EQ(t.errors.size(), 2u);
  for (const auto& row : t.errors) {
    EXPECT_LT(row[0], 1e-12);
    EXPECT_LT(row[1], 1e-12);
  }
  for (const auto& note : t.notes) {
    if (!note.empty()) EXPECT_EQ(note, "round-off");
  }
}

TEST(Convergence, StandingWaveSecondOrder) {
  const ConfigMap base = with(preset("standing-wave"), {{"t_end", "1"}});
  const ConvergenceTable t = self_convergence(base, 4);
  ASSERT_EQ(t.orders.size(), t.errors.size());
  EXPECT_GE(t.orders.back()[0], 1.8);
}

TEST(BedDump, Columns) {
  ConfigMap m = preset("whittaker-6");
  const Simulation sim(resolve(m));
  const fs::path dir = scratch_dir("beddump");
  fs::create_directories(dir);
  write_bed_dump(sim, {0.0, 0.5}, (dir / "bed.csv").string());
  std::ifstream in(dir / "bed.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,d,d_x,d_t");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2 * (sim.mesh().size() + 1));
  fs::remove_all(dir);
}
