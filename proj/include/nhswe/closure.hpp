/// @file closure.hpp
/// @brief Bottom non-hydrostatic pressure closures.
///
/// Each closure writes the bed pressure as
///   P_b = A p + B (h p)_x + C
/// in terms of the depth-averaged non-hydrostatic pressure p:
///   linear               A = 2,              B = 0,              C = 0
///   quadratic-simplified A = 3/2,            B = 0,              C = 0
///   quadratic-full       A = 6/(4 + d_x^2),  B = d_x/(4 + d_x^2), C = phi
/// The full form has no time derivative of an unknown, so it fits a
/// predictor-corrector projection step.

#ifndef NHSWE_CLOSURE_HPP
#define NHSWE_CLOSURE_HPP

#include <string>
#include <string_view>

#include "nhswe/bathymetry.hpp"

namespace nhswe {

enum class ClosureKind { Hydrostatic, Linear, QuadSimple, QuadFull };

ClosureKind parse_closure(std::string_view name);
std::string to_string(ClosureKind kind);

struct PhysParams {
  double g = 9.81;     ///< [m/s^2]
  double rho = 1000.0; ///< [kg/m^3]
};

struct ClosureTerms {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Geometric forcing of the full quadratic closure [Pa]:
///   phi = rho h / (4 + d_x^2) (g d_x eta_x - d_tt - 2 u d_xt - u^2 d_xx).
/// Dry points (h < h_min) give 0.
double phi(double h, double hu, double eta_x, const BedSample& bed, const PhysParams& params,
           double h_min = 1e-6);

/// Coefficients (A, B, C) of the closure at one point. phi_value is used by
/// the full closure only.
ClosureTerms closure_terms(ClosureKind kind, double d_x, double phi_value);

/// Bed pressure from the depth-averaged pressure and (h p)_x [Pa].
double bottom_pressure(ClosureKind kind, double p, double hp_x, const BedSample& bed,
                       double phi_value);

}  // namespace nhswe

#endif  // NHSWE_CLOSURE_HPP
