#include "nhswe/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>

namespace nhswe {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RunError("cannot write '" + path + "'");
  return out;
}

BedModel make_bed(const RunConfig& c) {
  BedModel bed(c.shape, c.x_left, c.x_right);
  if (c.freeze_time) bed.freeze_at(*c.freeze_time);
  return bed;
}

double max_abs(const Field& f) { return f.size() ? max_abs_nodal(f) : 0.0; }

}  // namespace

Simulation::Simulation(RunConfig config) : config_(std::move(config)) {
  bed_ = std::make_unique<BedModel>(make_bed(config_));
  predictor_ = std::make_unique<Predictor>(
      Mesh1D(config_.x_left, config_.x_right, config_.elements()), *bed_, config_.boundary,
      config_.predictor);
  stepper_ = std::make_unique<Stepper>(*predictor_, config_.stepper);
}

HydroState Simulation::initial_state() const {
  const Mesh1D& m = mesh();
  if (config_.initial == InitialCondition::Rest) return predictor_->still_water(0.0);

  const double h0 = std::get<FlatBed>(config_.shape).h0;
  const double a = config_.wave_amplitude;
  HydroState s(m.size());
  if (config_.initial == InitialCondition::StandingWave) {
    const double k = config_.wave_number;
    const double x0 = config_.x_left;
    s.h = project([&](double x) { return h0 + a * std::cos(k * (x - x0)); }, m);
    return s;
  }
  // Solitary wave of the Serre-Green-Naghdi equations.
  const double kappa = std::sqrt(3.0 * a / (4.0 * h0 * h0 * (h0 + a)));
  const double c = std::sqrt(config_.predictor.g * (h0 + a));
  const double xs = config_.wave_position;
  auto eta = [&](double x) {
    const double sech = 1.0 / std::cosh(kappa * (x - xs));
    return a * sech * sech;
  };
  auto eta_x = [&](double x) { return -2.0 * kappa * eta(x) * std::tanh(kappa * (x - xs)); };
  s.h = project([&](double x) { return h0 + eta(x); }, m);
  s.hu = project([&](double x) { return c * eta(x); }, m);
  s.hw = project([&](double x) { return -0.5 * c * h0 * eta_x(x); }, m);
  return s;
}

double Simulation::surface(const HydroState& state, double x) const {
  const Mesh1D& m = mesh();
  const std::size_t i = m.locate(std::min(x, std::nextafter(m.x_right(), m.x_left())));
  const double xi = m.to_reference(i, x);
  const double x_l = m.vertex(i);
  const double x_r = m.vertex(i + 1);
  const Modal d = from_vertices(bed_->depth(x_l, state.t), bed_->depth(x_r, state.t));
  return state.h[i].at(xi) - d.at(xi);
}

double max_velocity(const HydroState& state, double h_min) {
  double v = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (double xi : Quadrature::nodes) {
      const Conserved c = state.at(i, xi);
      if (c.h > h_min) v = std::max(v, std::abs(c.hu / c.h));
    }
  }
  return v;
}

RunOutput run(const RunConfig& config, const StepObserver& observer) {
  const Simulation sim(config);
  return run(sim, observer);
}

RunOutput run(const Simulation& sim, const StepObserver& observer) {
  const RunConfig& c = sim.config();
  const Mesh1D& mesh = sim.mesh();
  const std::size_t steps = c.steps();
  const double h_min = c.predictor.h_min;

  RunOutput out;
  out.gauges.positions = c.gauges;
  out.gauges.eta.resize(c.gauges.size());

  std::vector<std::size_t> snapshot_steps;
  for (double t : c.snapshots) {
    if (t < 0.0) throw RunError("negative snapshot time " + format_number(t));
    if (t > c.t_end + 0.5 * c.dt) continue;
    snapshot_steps.push_back(static_cast<std::size_t>(std::llround(t / c.dt)));
  }

  HydroState q = sim.initial_state();
  Field p(mesh.size());

  auto record = [&](std::size_t step) {
    out.gauges.t.push_back(q.t);
    for (std::size_t g = 0; g < c.gauges.size(); ++g) {
      out.gauges.eta[g].push_back(sim.surface(q, c.gauges[g]));
    }
    for (std::size_t k = 0; k < snapshot_steps.size(); ++k) {
      if (snapshot_steps[k] == step) {
        out.snapshots.push_back({q.t, q, p, sim.predictor().discrete_bed(q.t)});
      }
    }
    if (step % c.log_stride == 0 || step == steps) {
      out.log.push_back({step, q.t, integral(q.h, mesh), max_velocity(q, h_min), max_abs(p),
                         sim.predictor().cfl_number(q, c.dt)});
    }
  };

  RunSummary& sum = out.summary;
  sum.min_h1 = std::numeric_limits<double>::infinity();
  sum.min_h2 = std::numeric_limits<double>::infinity();
  record(0);
  for (std::size_t step = 1; step <= steps; ++step) {
    StepResult r;
    try {
      r = sim.stepper().step(q, c.dt);
    } catch (const std::exception& e) {
      char where[96];
      std::snprintf(where, sizeof where, "step %zu (t=%.6g): ", step, q.t + c.dt);
      throw RunError(where + std::string(e.what()));
    }
    r.state.t = static_cast<double>(step) * c.dt;
    if (observer) observer(step, r);
    const StepDiagnostics& d = r.diag;
    sum.max_g_sum = std::max(sum.max_g_sum, d.max_g_sum);
    if (d.wet_elements > 0) {
      sum.min_h1 = std::min(sum.min_h1, d.min_h1);
      sum.min_h2 = std::min(sum.min_h2, d.min_h2);
    }
    sum.max_solve_residual = std::max(sum.max_solve_residual, d.solve_residual);
    sum.max_corrector_residual = std::max(sum.max_corrector_residual, d.corrector_residual);
    q = std::move(r.state);
    p = std::move(r.p);
    record(step);
  }
  sum.steps = steps;
  if (!std::isfinite(sum.min_h1)) sum.min_h1 = sum.min_h2 = 0.0;
  out.final = {q.t, q, p, sim.predictor().discrete_bed(q.t)};
  return out;
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_t%.6g.csv", t);
  return buf;
}

void write_snapshot(const Snapshot& snap, const Mesh1D& mesh, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "x,h,hu,hw,p,d,eta\n";
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    for (std::size_t q = 0; q < 2; ++q) {
      const double xi = Quadrature::nodes[q];
      const double h = snap.state.h[i].at(xi);
      const double d = snap.bed[i].at(xi);
      out << format_number(mesh.quad_point(i, q)) << ',' << format_number(h) << ','
          << format_number(snap.state.hu[i].at(xi)) << ','
          << format_number(snap.state.hw[i].at(xi)) << ',' << format_number(snap.p[i].at(xi))
          << ',' << format_number(d) << ',' << format_number(h - d) << '\n';
    }
  }
}

void write_run(const RunOutput& output, const ConfigMap& resolved, const Simulation& sim,
               const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "snapshots");

  {
    std::ofstream out = open_output((fs::path(dir) / "gauges.csv").string());
    out << 't';
    for (std::size_t g = 0; g < output.gauges.positions.size(); ++g) out << ",eta_g" << g + 1;
    out << '\n';
    for (std::size_t k = 0; k < output.gauges.t.size(); ++k) {
      out << format_number(output.gauges.t[k]);
      for (const auto& series : output.gauges.eta) out << ',' << format_number(series[k]);
      out << '\n';
    }
  }
  {
    std::ofstream out = open_output((fs::path(dir) / "runlog.csv").string());
    out << "step,t,mass,max_u,max_p,cfl\n";
    for (const LogRow& r : output.log) {
      out << r.step << ',' << format_number(r.t) << ',' << format_number(r.mass) << ','
          << format_number(r.max_u) << ',' << format_number(r.max_p) << ','
          << format_number(r.cfl) << '\n';
    }
  }
  for (const Snapshot& s : output.snapshots) {
    write_snapshot(s, sim.mesh(), (fs::path(dir) / "snapshots" / snapshot_name(s.t)).string());
  }
  std::ofstream cfg = open_output((fs::path(dir) / "config.resolved").string());
  cfg << format_config(resolved);
}

ConvergenceTable self_convergence(const ConfigMap& base, std::size_t levels) {
  if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
  ConvergenceTable table;
  table.variables = {"h", "hu", "p"};

  // Errors compare the change from each level's own initial state, so the
  // projection of the initial data (and of the bed) does not enter.
  std::vector<std::unique_ptr<Simulation>> sims;
  std::vector<Snapshot> finals;
  std::vector<HydroState> initials;
  for (std::size_t k = 0; k < levels; ++k) {
    ConfigMap cfg = base;
    const double scale = std::ldexp(1.0, -static_cast<int>(k));
    RunConfig probe = resolve(cfg);
    ConfigMap level = base;
    level["dx"] = format_number(probe.dx * scale);
    level["dt"] = format_number(probe.dt * scale);
    level["hammack.ramp_width"] = cfg.at("hammack.ramp_width");
    level["sponge_sigma0"] = cfg.at("sponge_sigma0");
    level["snapshots"] = "";
    level["gauges"] = "";
    sims.push_back(std::make_unique<Simulation>(resolve(level)));
    table.dx.push_back(sims.back()->config().dx);
    initials.push_back(sims.back()->initial_state());
    finals.push_back(run(*sims.back()).final);
  }
  auto change = [](const Field& end, const Field& start) {
    Field out(end.size());
    for (std::size_t i = 0; i < end.size(); ++i) {
      out[i] = {end[i].mean - start[i].mean, end[i].slope - start[i].slope};
    }
    return out;
  };

  for (std::size_t k = 0; k + 1 < levels; ++k) {
    const Mesh1D& coarse = sims[k]->mesh();
    const Mesh1D& fine = sims[k + 1]->mesh();
    table.errors.push_back({
        l2_difference_refined(change(finals[k].state.h, initials[k].h), coarse,
                              change(finals[k + 1].state.h, initials[k + 1].h), fine),
        l2_difference_refined(change(finals[k].state.hu, initials[k].hu), coarse,
                              change(finals[k + 1].state.hu, initials[k + 1].hu), fine),
        l2_difference_refined(finals[k].p, coarse, finals[k + 1].p, fine),
    });
  }
  table.dx.pop_back();

  for (std::size_t k = 0; k < table.errors.size(); ++k) {
    std::vector<double> orders(table.variables.size(), std::numeric_limits<double>::quiet_NaN());
    std::string note;
    bool round_off = true;
    for (std::size_t v = 0; v < table.variables.size(); ++v) {
      const double e = table.errors[k][v];
      if (e > 1e-12) round_off = false;
      if (k > 0) {
        const double prev = table.errors[k - 1][v];
        if (prev > 1e-12 && e > 1e-12) orders[v] = std::log2(prev / e);
        if (prev > 1e-12 && e > prev) note = "diverging";
      }
    }
    if (round_off) note = "round-off";
    table.orders.push_back(orders);
    table.notes.push_back(note);
  }
  return table;
}

ManufacturedErrors manufactured_elliptic(std::size_t elements) {
  // Wet stretch of the sloping beach while the slide moves, with an
  // arbitrary smooth predicted state and exact pressure/momentum.
  const LynettBed beach;
  const double t = 3.0;
  const double a = 3.0;
  const double b = 13.0;
  const double dt = 0.005;
  const PhysParams phys;
  const Mesh1D mesh(a, b, elements);

  auto p_exact = [](double x) { return 50.0 * std::sin(1.3 * x) + 20.0; };
  auto p_x = [](double x) { return 65.0 * std::cos(1.3 * x); };
  auto u_exact = [](double x) { return 0.05 * std::cos(0.7 * x); };
  auto u_x = [](double x) { return -0.035 * std::sin(0.7 * x); };

  auto input = [&](double x) {
    const BedSample bed = eval_lynett(beach, x, t);
    CorrectorInput in;
    in.bed = bed;
    in.h = bed.d + 0.01 * std::sin(x);
    in.h_x = bed.d_x + 0.01 * std::cos(x);
    in.hu = 0.04 * std::sin(0.5 * x);
    in.hw = 0.002 * std::cos(x);
    in.phi = phi(in.h, in.hu, in.h_x - bed.d_x, bed, phys);
    return in;
  };

  EllipticCoefficients c(elements);
  for (std::size_t e = 0; e < elements; ++e) {
    for (std::size_t q = 0; q < 2; ++q) {
      const double x = mesh.quad_point(e, q);
      const PointCoefficients pc = point_coefficients(ClosureKind::QuadFull, input(x), dt, phys);
      c.g1[e][q] = pc.g1;
      c.g2[e][q] = pc.g2;
      c.h1[e][q] = pc.h1;
      c.h2[e][q] = pc.h2;
      c.f1[e][q] = p_x(x) + pc.g1 * p_exact(x) + pc.h1 * u_exact(x);
      c.f2[e][q] = u_x(x) + pc.h2 * p_exact(x) + pc.g2 * u_exact(x);
    }
  }
  for (std::size_t k = 0; k <= elements; ++k) {
    const PointCoefficients pc =
        point_coefficients(ClosureKind::QuadFull, input(mesh.vertex(k)), dt, phys);
    c.face_scale[k] = std::sqrt(pc.h1 / pc.h2);
  }
  const EllipticSolution sol =
      solve(assemble_ldg(c, mesh.dx(), EllipticBoundary::momentum(u_exact(a)),
                         EllipticBoundary::pressure(p_exact(b)), FluxPenalty{}));

  // Five-point Gauss rule for the error integrals.
  static constexpr std::array<double, 5> xg{-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> wg{0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};
  double ep = 0.0;
  double eu = 0.0;
  for (std::size_t e = 0; e < elements; ++e) {
    for (std::size_t q = 0; q < 5; ++q) {
      const double x = mesh.to_physical(e, xg[q]);
      const double w = 0.5 * mesh.dx() * wg[q];
      ep += w * std::pow(sol.p[e].at(xg[q]) - p_exact(x), 2);
      eu += w * std::pow(sol.hu[e].at(xg[q]) - u_exact(x), 2);
    }
  }
  return {std::sqrt(ep), std::sqrt(eu)};
}

ConvergenceTable manufactured_convergence(std::size_t levels, std::size_t base_elements) {
  if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
  ConvergenceTable table;
  table.variables = {"p", "hu"};
  for (std::size_t k = 0; k < levels; ++k) {
    const std::size_t n = base_elements << k;
    const ManufacturedErrors e = manufactured_elliptic(n);
    table.dx.push_back(10.0 / static_cast<double>(n));
    table.errors.push_back({e.p, e.hu});
    std::vector<double> orders(2, std::numeric_limits<double>::quiet_NaN());
    std::string note;
    if (k > 0) {
      for (std::size_t v = 0; v < 2; ++v) {
        orders[v] = std::log2(table.errors[k - 1][v] / table.errors[k][v]);
        if (table.errors[k][v] > table.errors[k - 1][v]) note = "diverging";
      }
    }
    table.orders.push_back(orders);
    table.notes.push_back(note);
  }
  return table;
}

void write_convergence(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "level,dx";
  for (const auto& v : table.variables) out << ",err_" << v;
  for (const auto& v : table.variables) out << ",order_" << v;
  out << ",note\n";
  for (std::size_t k = 0; k < table.errors.size(); ++k) {
    out << k << ',' << format_number(table.dx[k]);
    for (double e : table.errors[k]) out << ',' << format_number(e);
    for (double o : table.orders[k]) out << ',' << (std::isnan(o) ? "nan" : format_number(o));
    out << ',' << table.notes[k] << '\n';
  }
}

ClosureComparison compare_closures(const ConfigMap& base, const std::vector<std::string>& closures,
                                   const std::vector<double>& times) {
  if (closures.size() < 2) throw ConfigError("compare-closures needs at least two closures");
  if (times.empty()) throw ConfigError("compare-closures needs at least one time");
  ClosureComparison cmp;
  cmp.closures = closures;
  cmp.times = times;

  std::vector<std::future<std::vector<Snapshot>>> jobs;
  for (const std::string& name : closures) {
    ConfigMap cfg = base;
    cfg["closure"] = name;
    cfg["snapshots"] = format_list(times);
    const double last = *std::max_element(times.begin(), times.end());
    cfg["t_end"] = format_number(last);
    RunConfig rc = resolve(cfg);
    jobs.push_back(std::async(std::launch::async, [rc] { return run(rc).snapshots; }));
  }
  for (auto& j : jobs) cmp.snapshots.push_back(j.get());

  ConfigMap cfg = base;
  const Mesh1D mesh = Simulation(resolve(cfg)).mesh();
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (std::size_t a = 0; a < closures.size(); ++a) {
      for (std::size_t b = a + 1; b < closures.size(); ++b) {
        const Snapshot& sa = cmp.snapshots[a][k];
        const Snapshot& sb = cmp.snapshots[b][k];
        cmp.differences.push_back({sa.t, closures[a], closures[b],
                                   l2_difference(sa.state.h, sb.state.h, mesh),
                                   l2_difference(sa.state.hu, sb.state.hu, mesh)});
      }
    }
  }
  return cmp;
}

void write_comparison(const ClosureComparison& cmp, const Mesh1D& mesh, const std::string& dir) {
  namespace fs = std::filesystem;
  for (std::size_t c = 0; c < cmp.closures.size(); ++c) {
    const fs::path sub = fs::path(dir) / cmp.closures[c];
    fs::create_directories(sub);
    for (const Snapshot& s : cmp.snapshots[c]) {
      write_snapshot(s, mesh, (sub / snapshot_name(s.t)).string());
    }
  }
  std::ofstream out = open_output((fs::path(dir) / "differences.csv").string());
  out << "t,closure_a,closure_b,l2_eta,l2_hu\n";
  for (const ClosureDifference& d : cmp.differences) {
    out << format_number(d.t) << ',' << d.a << ',' << d.b << ',' << format_number(d.l2_eta) << ','
        << format_number(d.l2_hu) << '\n';
  }
}

void write_bed_dump(const Simulation& sim, const std::vector<double>& times,
                    const std::string& path) {
  std::ofstream out = open_output(path);
  out << "t,x,d,d_x,d_t\n";
  const Mesh1D& m = sim.mesh();
  for (double t : times) {
    for (std::size_t k = 0; k <= m.size(); ++k) {
      const double x = m.vertex(k);
      const BedSample s = sim.bed().eval(x, t);
      out << format_number(t) << ',' << format_number(x) << ',' << format_number(s.d) << ','
          << format_number(s.d_x) << ',' << format_number(s.d_t) << '\n';
    }
  }
}

}  // namespace nhswe
