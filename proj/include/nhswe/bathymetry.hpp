/// @file bathymetry.hpp
/// @brief Analytic, time-dependent bed models for the benchmark scenarios.
///
/// Depth d is measured positive downward from the still-water level, so the
/// fluid depth is h = eta + d. Every model returns d together with the
/// derivatives the non-hydrostatic closure consumes.

#ifndef NHSWE_BATHYMETRY_HPP
#define NHSWE_BATHYMETRY_HPP

#include <optional>
#include <string>
#include <variant>

namespace nhswe {

/// Bed depth and its derivatives at one point (x, t).
struct BedSample {
  double d = 0.0;     ///< depth below still water [m]
  double d_x = 0.0;   ///< slope [-]
  double d_t = 0.0;   ///< [m/s]
  double d_tt = 0.0;  ///< [m/s^2]
  double d_xt = 0.0;  ///< [1/s]
  double d_xx = 0.0;  ///< [1/m]
};

struct FlatBed {
  double h0 = 1.0;
};

/// Exponential plate motion, d = h0 - zeta0 (1 - exp(-alpha t)) R(x), with R a
/// tanh ramp standing in for the Heaviside step H(b^2 - x^2).
struct HammackBed {
  double h0 = 0.05;
  double b = 0.61;
  double zeta0 = 0.005;  ///< signed: > 0 uplift, < 0 down-thrust
  double alpha = 1.0;
  double ramp_width = 0.05;  ///< full transition width of each plate edge [m]
};

/// Quartic bump translated by the piecewise accelerate/glide/decelerate law.
struct WhittakerBed {
  double h0 = 0.175;
  double slide_thickness = 0.026;  ///< H_s
  double slide_length = 0.5;       ///< L_s
  double a0 = 1.5;
  double u_t = 0.327;
  double t1 = 0.218;
  double t2 = 2.218;
  double t3 = 2.436;
};

/// Plane beach with a tanh-shaped slide moving offshore, S(t)=S0 ln cosh(t/t0).
struct LynettBed {
  double theta_deg = 6.0;
  double thickness = 0.05;  ///< Delta h
  double length = 1.0;      ///< b
  double s0 = 4.712;
  double t0 = 3.713;
  double x0 = 2.379;
};

/// Position, velocity and acceleration of a translating slide.
struct Kinematics {
  double s = 0.0;
  double v = 0.0;
  double a = 0.0;
};

/// Piecewise slide law of the sliding-block experiment; C1 when u_t = a0 t1
/// and t3 - t2 = t1.
Kinematics whittaker_motion(const WhittakerBed& bed, double t);
Kinematics lynett_motion(const LynettBed& bed, double t);

/// alpha = 1.11 / t_c with t_c sqrt(g h0) / b = 0.148 (uplift) or 0.093
/// (down-thrust).
double hammack_alpha(bool uplift, double h0, double b, double g);

BedSample eval_flat(const FlatBed& bed, double x, double t);
BedSample eval_hammack(const HammackBed& bed, double x, double t);
BedSample eval_whittaker(const WhittakerBed& bed, double x, double t);
BedSample eval_lynett(const LynettBed& bed, double x, double t);

/// Scenario bed plus domain bounds. Reentrant; eval is a pure function.
class BedModel {
 public:
  using Shape = std::variant<FlatBed, HammackBed, WhittakerBed, LynettBed>;

  BedModel(Shape shape, double x_left, double x_right);

  BedSample eval(double x, double t) const;
  double depth(double x, double t) const { return eval(x, t).d; }

  /// Evaluate at a fixed time for every t and report zero time derivatives.
  void freeze_at(double t) { frozen_ = t; }
  bool frozen() const { return frozen_.has_value(); }

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  const Shape& shape() const { return shape_; }
  std::string name() const;

 private:
  Shape shape_;
  double x_left_;
  double x_right_;
  std::optional<double> frozen_;
};

}  // namespace nhswe

#endif  // NHSWE_BATHYMETRY_HPP
