/// @file runner.hpp
/// @brief Scenario runs, output writers, convergence and closure-comparison
/// studies.

#ifndef NHSWE_RUNNER_HPP
#define NHSWE_RUNNER_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nhswe/config.hpp"
#include "nhswe/stepper.hpp"

namespace nhswe {

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mesh, bed, predictor and stepper of one run. Not copyable: the predictor
/// and stepper refer to the bed and predictor owned here.
class Simulation {
 public:
  explicit Simulation(RunConfig config);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const RunConfig& config() const { return config_; }
  const Mesh1D& mesh() const { return predictor_->mesh(); }
  const BedModel& bed() const { return *bed_; }
  const Predictor& predictor() const { return *predictor_; }
  const Stepper& stepper() const { return *stepper_; }

  HydroState initial_state() const;

  /// Free-surface elevation h - d, with d the discrete bed at time t.
  double surface(const HydroState& state, double x) const;

 private:
  RunConfig config_;
  std::unique_ptr<BedModel> bed_;
  std::unique_ptr<Predictor> predictor_;
  std::unique_ptr<Stepper> stepper_;
};

struct Snapshot {
  double t = 0.0;
  HydroState state;
  Field p;
  Field bed;  ///< discrete bed at t
};

struct LogRow {
  std::size_t step;
  double t;
  double mass;
  double max_u;
  double max_p;
  double cfl;
};

struct GaugeSeries {
  std::vector<double> positions;
  std::vector<double> t;
  std::vector<std::vector<double>> eta;  ///< eta[gauge][sample]
};

struct RunSummary {
  std::size_t steps = 0;
  double max_g_sum = 0.0;
  double min_h1 = 0.0;
  double min_h2 = 0.0;
  double max_solve_residual = 0.0;
  double max_corrector_residual = 0.0;
};

struct RunOutput {
  GaugeSeries gauges;
  std::vector<Snapshot> snapshots;
  std::vector<LogRow> log;
  Snapshot final;
  RunSummary summary;
};

/// Called after every step with the step index (1-based) and its result.
using StepObserver = std::function<void(std::size_t, const StepResult&)>;

/// Fixed-step run to t_end; snapshot times past t_end are skipped. A failing
/// step is rethrown as RunError carrying the step index and time.
RunOutput run(const RunConfig& config, const StepObserver& observer = {});
RunOutput run(const Simulation& sim, const StepObserver& observer = {});

double max_velocity(const HydroState& state, double h_min);

/// Writes gauges.csv, runlog.csv, snapshots/ and config.resolved into dir.
void write_run(const RunOutput& output, const ConfigMap& resolved, const Simulation& sim,
               const std::string& dir);
void write_snapshot(const Snapshot& snap, const Mesh1D& mesh, const std::string& path);
std::string snapshot_name(double t);

/// Self-convergence study: level k uses dx / 2^k and dt / 2^k. Errors are
/// L2 differences of q(t_end) - q(0) between consecutive levels.
struct ConvergenceTable {
  std::vector<std::string> variables;
  std::vector<double> dx;
  std::vector<std::vector<double>> errors;  ///< errors[level][variable]
  std::vector<std::vector<double>> orders;  ///< NaN where undefined
  std::vector<std::string> notes;           ///< per level: "", "round-off" or "diverging"
};
ConvergenceTable self_convergence(const ConfigMap& base, std::size_t levels);

/// Manufactured solution of the pressure system on a moving-slope geometry;
/// L2 errors of p and hu against the exact fields.
struct ManufacturedErrors {
  double p;
  double hu;
};
ManufacturedErrors manufactured_elliptic(std::size_t elements);
ConvergenceTable manufactured_convergence(std::size_t levels, std::size_t base_elements = 20);

void write_convergence(const ConvergenceTable& table, const std::string& path);

struct ClosureDifference {
  double t;
  std::string a;
  std::string b;
  double l2_eta;
  double l2_hu;
};
struct ClosureComparison {
  std::vector<std::string> closures;
  std::vector<double> times;
  std::vector<std::vector<Snapshot>> snapshots;  ///< [closure][time]
  std::vector<ClosureDifference> differences;
};
/// Runs the scenario once per closure (concurrently) and compares the
/// surface and momentum at the given times.
ClosureComparison compare_closures(const ConfigMap& base, const std::vector<std::string>& closures,
                                   const std::vector<double>& times);
void write_comparison(const ClosureComparison& cmp, const Mesh1D& mesh, const std::string& dir);

/// CSV with columns t,x,d,d_x,d_t at the mesh vertices for each time.
void write_bed_dump(const Simulation& sim, const std::vector<double>& times,
                    const std::string& path);

}  // namespace nhswe

#endif  // NHSWE_RUNNER_HPP
