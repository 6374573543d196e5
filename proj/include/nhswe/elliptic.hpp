/// @file elliptic.hpp
/// @brief LDG discretisation of the first-order pressure system
///
///   p_x + g1 p + h1 u = f1,
///   u_x + h2 p + g2 u = f2,
///
/// for the depth-averaged non-hydrostatic pressure p and the corrected
/// momentum u = hu. With g1 + g2 = 0 and h1, h2 > 0 the system is coercive
/// when tested against (u, p).
///
/// Interface fluxes are alternating with jump penalties scaled by
/// s = sqrt(h1 / h2) at the interface:
///   p_hat = p^- - tau_u s [u],   u_hat = u^+ - (tau_p / s) [p],
/// where [a] = a^+ - a^-. At a boundary the prescribed quantity takes the
/// place of the missing trace: with u = u_b given, u_hat = u_b and p_hat is
/// the interior p penalised by s (u_in - u_b) (sign as above); with p = p_b
/// given, p_hat = p_b and u_hat is the interior u penalised by (p_in - p_b) / s.
/// Unknowns are interleaved per element as (p mean, p slope, u mean, u slope).

#ifndef NHSWE_ELLIPTIC_HPP
#define NHSWE_ELLIPTIC_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "nhswe/banded.hpp"
#include "nhswe/bathymetry.hpp"
#include "nhswe/closure.hpp"
#include "nhswe/dgmesh.hpp"

namespace nhswe {

/// Boundary condition at one end of an elliptic subdomain.
struct EllipticBoundary {
  enum class Kind { Momentum, Pressure };
  Kind kind = Kind::Momentum;
  double value = 0.0;

  static EllipticBoundary momentum(double v = 0.0) { return {Kind::Momentum, v}; }
  static EllipticBoundary pressure(double v = 0.0) { return {Kind::Pressure, v}; }
};

struct FluxPenalty {
  double tau_p = 1.0;
  double tau_u = 0.0;
};

using NodePair = std::array<double, 2>;

/// Coefficients of one contiguous subdomain, at the two quadrature nodes of
/// each element; face_scale holds sqrt(h1/h2) at the size()+1 vertices.
struct EllipticCoefficients {
  std::vector<NodePair> g1, g2, h1, h2, f1, f2;
  std::vector<double> face_scale;

  EllipticCoefficients() = default;
  explicit EllipticCoefficients(std::size_t elements)
      : g1(elements), g2(elements), h1(elements), h2(elements), f1(elements), f2(elements),
        face_scale(elements + 1, 1.0) {}
  std::size_t size() const { return g1.size(); }
};

/// Predicted quantities at one point feeding the coefficient formulas.
struct CorrectorInput {
  double h = 0.0;    ///< predicted depth
  double h_x = 0.0;  ///< DG gradient of the predicted depth
  double hu = 0.0;
  double hw = 0.0;
  double phi = 0.0;
  BedSample bed;
};

/// Row of the system at one point: {g1, g2, h1, h2, f1, f2}.
struct PointCoefficients {
  double g1, g2, h1, h2, f1, f2;
};

PointCoefficients point_coefficients(ClosureKind kind, const CorrectorInput& in, double dt,
                                     const PhysParams& params);

class EllipticAssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients over elements [first, last) of the predicted state. The
/// inputs are given per element at the quadrature nodes; vertex_inputs are
/// used for the penalty scale only. Throws EllipticAssemblyError if the depth
/// at any node is below h_min.
EllipticCoefficients build_coefficients(ClosureKind kind,
                                        const std::vector<std::array<CorrectorInput, 2>>& inputs,
                                        const std::vector<CorrectorInput>& vertex_inputs,
                                        double dt, const PhysParams& params, double h_min);

struct EllipticSystem {
  BandedMatrix matrix;
  std::vector<double> rhs;
  std::size_t elements;
  /// The p rows of each element couple only to the u unknowns of that
  /// element (tau_u = 0), so u can be eliminated element by element.
  bool condensable = false;
};

EllipticSystem assemble_ldg(const EllipticCoefficients& coeffs, double dx, EllipticBoundary left,
                            EllipticBoundary right, const FluxPenalty& penalty);

struct EllipticSolution {
  Field p;
  Field hu;
  double residual = 0.0;  ///< relative residual of the linear solve
};

/// Direct banded solve, on the condensed p system when the system allows it.
/// A failed pivot is rethrown with its element index.
EllipticSolution solve(const EllipticSystem& system);

/// LDG lifted derivatives of (p, u): the P1 fields D with
///   int D v = -int a v_x + [a_hat v]
/// using the same fluxes and boundary data as the assembled system.
struct LiftedDerivatives {
  Field dp;
  Field du;
};
LiftedDerivatives lifted_derivatives(const Field& p, const Field& u,
                                     const std::vector<double>& face_scale, double dx,
                                     EllipticBoundary left, EllipticBoundary right,
                                     const FluxPenalty& penalty);

}  // namespace nhswe

#endif  // NHSWE_ELLIPTIC_HPP
