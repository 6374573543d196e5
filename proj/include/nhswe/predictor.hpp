/// @file predictor.hpp
/// @brief Hydrostatic RKDG2 predictor with Rusanov fluxes, bathymetry source,
/// positivity-preserving wetting/drying limiter and sponge relaxation.

#ifndef NHSWE_PREDICTOR_HPP
#define NHSWE_PREDICTOR_HPP

#include <stdexcept>
#include <string>

#include "nhswe/bathymetry.hpp"
#include "nhswe/dgmesh.hpp"

namespace nhswe {

/// Conserved unknowns (h, hu, hw) at one point.
struct Conserved {
  double h = 0.0;
  double hu = 0.0;
  double hw = 0.0;
};

struct Flux3 {
  double h = 0.0;
  double hu = 0.0;
  double hw = 0.0;
};

/// DG coefficient fields of (h, hu, hw) at time t.
struct HydroState {
  Field h;
  Field hu;
  Field hw;
  double t = 0.0;

  explicit HydroState(std::size_t elements = 0) : h(elements), hu(elements), hw(elements) {}
  std::size_t size() const { return h.size(); }
  Conserved at(std::size_t i, double xi) const { return {h[i].at(xi), hu[i].at(xi), hw[i].at(xi)}; }
  Conserved left_trace(std::size_t i) const { return at(i, -1.0); }
  Conserved right_trace(std::size_t i) const { return at(i, 1.0); }
};

enum class BoundaryKind { Wall, Sponge };

struct BoundarySpec {
  BoundaryKind left = BoundaryKind::Wall;
  BoundaryKind right = BoundaryKind::Wall;
};

struct PredictorSettings {
  double g = 9.81;
  double h_min = 1e-6;         ///< dry tolerance [m]
  double cfl_max = 0.45;
  double tvb_m = 0.0;          ///< slopes are left alone while overshoot <= tvb_m * dx^2
  double sponge_fraction = 0.1;
  double sponge_sigma0 = 0.0;  ///< [1/s]
};

class CflViolation : public std::runtime_error {
 public:
  explicit CflViolation(const std::string& what) : std::runtime_error(what) {}
};

Flux3 physical_flux(const Conserved& q, double g, double h_min);

/// Local Lax-Friedrichs flux. Inputs must have non-negative depth.
Flux3 rusanov_flux(const Conserved& left, const Conserved& right, double g, double h_min = 1e-6);

/// Exterior state for a boundary interface given the adjacent interior trace.
Conserved ghost_state(const Conserved& interior, BoundaryKind kind);

/// Barth-Jespersen slope clipping of mean +/- slope into [lo, hi], skipped
/// when the overshoot stays within tol.
double clip_slope(double mean, double slope, double lo, double hi, double tol);

/// Tendencies of the conserved fields, stored as modal coefficients.
struct Tendency {
  Field h;
  Field hu;
  Field hw;
};

class Predictor {
 public:
  Predictor(Mesh1D mesh, const BedModel& bed, BoundarySpec boundary, PredictorSettings settings);

  const Mesh1D& mesh() const { return mesh_; }
  const BoundarySpec& boundary() const { return boundary_; }
  const PredictorSettings& settings() const { return settings_; }
  const BedModel& bed_model() const { return *bed_; }

  /// Continuous piecewise-linear vertex interpolant of the depth at time t.
  Field discrete_bed(double t) const;

  /// Lake-at-rest state h = max(0, eta0 + d) interpolated at the vertices.
  HydroState still_water(double t, double eta0 = 0.0) const;

  Tendency hydrostatic_rhs(const HydroState& state, const Field& bed) const;

  /// Wetting/drying limiter: keeps element means of h, enforces nodal h >= 0,
  /// zeroes momentum of dry elements and limits velocities.
  void limit_and_dry(HydroState& state, const Field& bed) const;

  void relax_sponge(HydroState& state, const Field& bed, double dt) const;

  /// Heun step with limiting and sponge relaxation after each stage.
  HydroState rk2_step(const HydroState& state, double dt) const;

  /// max(|u| + sqrt(g h)) dt / dx over all nodal values.
  double cfl_number(const HydroState& state, double dt) const;

  /// Relaxation rate at element i; zero outside the sponge zones.
  double sponge_rate(std::size_t i) const;

 private:
  Mesh1D mesh_;
  const BedModel* bed_;
  BoundarySpec boundary_;
  PredictorSettings settings_;
};

}  // namespace nhswe

#endif  // NHSWE_PREDICTOR_HPP
