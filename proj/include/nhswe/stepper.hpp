/// @file stepper.hpp
/// @brief Projection time step: hydrostatic predictor, pressure solve on the
/// wet subdomains, momentum correction.

#ifndef NHSWE_STEPPER_HPP
#define NHSWE_STEPPER_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "nhswe/closure.hpp"
#include "nhswe/elliptic.hpp"
#include "nhswe/predictor.hpp"

namespace nhswe {

struct StepperSettings {
  ClosureKind closure = ClosureKind::QuadFull;
  PhysParams phys;
  FluxPenalty penalty;
  double nh_min_depth = 1e-6;    ///< elements thinner than this at a vertex skip the solve
  bool check_residual = false;   ///< evaluate the momentum-correction residual each step
};

/// Contiguous run of wet elements [first, last).
struct WetRange {
  std::size_t first;
  std::size_t last;
};

struct StepDiagnostics {
  double max_g_sum = 0.0;      ///< max |g1 + g2| over solved nodes
  double min_h1 = 0.0;
  double min_h2 = 0.0;
  double solve_residual = 0.0;      ///< worst relative residual of the linear solves
  double corrector_residual = 0.0;  ///< worst relative momentum-correction residual
  std::size_t wet_elements = 0;
  std::size_t subdomains = 0;
};

struct StepResult {
  HydroState state;
  Field p;  ///< non-hydrostatic pressure, zero on dry elements
  StepDiagnostics diag;
};

/// Wet mask: both vertex traces of h at least min_depth.
std::vector<WetRange> wet_ranges(const Field& h, double min_depth);

/// Corrected vertical momentum at the two quadrature nodes:
///   hw = hw~ + dt/rho (A p + B (h~ p)_x + C),
/// with (h~ p)_x = h~ D(p) + h~_x p and D the lifted derivative.
NodePair corrected_hw(ClosureKind kind, const std::array<CorrectorInput, 2>& in, const Modal& p,
                      const Modal& dp, double dt, const PhysParams& params);

/// Residual of the horizontal momentum correction at one node,
///   (hu - hu~)/dt + (h~ p)_x / rho - d_x P_b / rho,
/// together with the largest magnitude among its terms.
struct NodeResidual {
  double residual;
  double scale;
};
NodeResidual momentum_residual(ClosureKind kind, const CorrectorInput& in, double p, double dp,
                               double hu_new, double dt, const PhysParams& params);

class Stepper {
 public:
  Stepper(const Predictor& predictor, StepperSettings settings);

  const Predictor& predictor() const { return *predictor_; }
  const StepperSettings& settings() const { return settings_; }

  StepResult step(const HydroState& state, double dt) const;

  /// Pressure solve and correction applied to a predicted state at time t
  /// (the state's own time).
  StepResult correct(const HydroState& predicted, double dt) const;

 private:
  const Predictor* predictor_;
  StepperSettings settings_;
};

}  // namespace nhswe

#endif  // NHSWE_STEPPER_HPP
