#include "nhswe/bathymetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>

namespace nhswe {

namespace {

double sech2(double z) {
  const double c = std::cosh(z);
  return 1.0 / (c * c);
}

// ln(cosh z) without overflow for large |z|.
double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

/// A profile subtracted from a static base, translating with position X(t).
/// Values are P(y), P'(y), P''(y) at y = x - X(t).
struct Profile {
  double value = 0.0;
  double dy = 0.0;
  double dyy = 0.0;
};

BedSample translate(double base, double base_x, const Profile& p, const Kinematics& m) {
  BedSample s;
  s.d = base - p.value;
  s.d_x = base_x - p.dy;
  s.d_xx = -p.dyy;
  s.d_t = p.dy * m.v;
  s.d_xt = p.dyy * m.v;
  s.d_tt = -p.dyy * m.v * m.v + p.dy * m.a;
  return s;
}

}  // namespace

double hammack_alpha(bool uplift, double h0, double b, double g) {
  const double c = uplift ? 0.148 : 0.093;
  const double t_c = c * b / std::sqrt(g * h0);
  return 1.11 / t_c;
}

Kinematics whittaker_motion(const WhittakerBed& w, double t) {
  Kinematics k;
  if (t <= 0.0) return k;
  const double s1 = 0.5 * w.a0 * w.t1 * w.t1;
  if (t <= w.t1) {
    k.s = 0.5 * w.a0 * t * t;
    k.v = w.a0 * t;
    k.a = w.a0;
  } else if (t <= w.t2) {
    k.s = s1 + w.u_t * (t - w.t1);
    k.v = w.u_t;
  } else if (t <= w.t3) {
    const double tau = t - w.t2;
    k.s = s1 + w.u_t * (t - w.t1) - 0.5 * w.a0 * tau * tau;
    k.v = w.u_t - w.a0 * tau;
    k.a = -w.a0;
  } else {
    const double tau = w.t3 - w.t2;
    k.s = s1 + w.u_t * (w.t3 - w.t1) - 0.5 * w.a0 * tau * tau;
  }
  return k;
}

Kinematics lynett_motion(const LynettBed& l, double t) {
  const double z = t / l.t0;
  return {l.s0 * log_cosh(z), l.s0 / l.t0 * std::tanh(z), l.s0 / (l.t0 * l.t0) * sech2(z)};
}

BedSample eval_flat(const FlatBed& bed, double, double) {
  BedSample s;
  s.d = bed.h0;
  return s;
}

BedSample eval_hammack(const HammackBed& p, double x, double t) {
  const double delta = 0.5 * p.ramp_width;
  const double z = (std::abs(x) - p.b) / delta;
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  // Beyond |z| = 20 the tanh is 1 to within round-off: snap so the bed is
  // exactly static away from the plate edges.
  const bool saturated = std::abs(z) > 20.0;
  const double th = saturated ? std::copysign(1.0, z) : std::tanh(z);
  const double s2 = saturated ? 0.0 : sech2(z);
  const double ramp = 0.5 * (1.0 - th);
  const double ramp_x = -0.5 * s2 / delta * sgn;
  const double ramp_xx = s2 * th / (delta * delta);

  const double tt = std::max(t, 0.0);
  const double e = std::exp(-p.alpha * tt);
  const double lift = 1.0 - e;
  const double lift_t = p.alpha * e;
  const double lift_tt = -p.alpha * p.alpha * e;

  BedSample s;
  s.d = p.h0 - p.zeta0 * lift * ramp;
  s.d_x = -p.zeta0 * lift * ramp_x;
  s.d_xx = -p.zeta0 * lift * ramp_xx;
  s.d_t = -p.zeta0 * lift_t * ramp;
  s.d_tt = -p.zeta0 * lift_tt * ramp;
  s.d_xt = -p.zeta0 * lift_t * ramp_x;
  return s;
}

BedSample eval_whittaker(const WhittakerBed& w, double x, double t) {
  const Kinematics m = whittaker_motion(w, t);
  const double y = x - m.s;
  Profile p;
  // Support is the open interval |y| < L_s/2; the quartic vanishes at its ends.
  if (std::abs(y) < 0.5 * w.slide_length) {
    const double k = 2.0 / w.slide_length;
    const double r = k * y;
    p.value = w.slide_thickness * (1.0 - r * r * r * r);
    p.dy = -4.0 * w.slide_thickness * r * r * r * k;
    p.dyy = -12.0 * w.slide_thickness * r * r * k * k;
  }
  return translate(w.h0, 0.0, p, m);
}

BedSample eval_lynett(const LynettBed& l, double x, double t) {
  const double theta = l.theta_deg * std::numbers::pi / 180.0;
  const double ct = std::cos(theta);
  const double a = 2.0 * ct;
  const double half = 0.5 * l.length * ct;

  Kinematics m = lynett_motion(l, t);
  m.s = l.x0 + m.s * ct;
  m.v *= ct;
  m.a *= ct;

  const double y = x - m.s;
  const double zl = a * (y + half);
  const double zr = a * (y - half);
  const double tl = std::tanh(zl);
  const double tr = std::tanh(zr);
  const double sl = sech2(zl);
  const double sr = sech2(zr);

  const double A = 1.0 + tl;
  const double A1 = a * sl;
  const double A2 = -2.0 * a * a * sl * tl;
  const double B = 1.0 - tr;
  const double B1 = -a * sr;
  const double B2 = 2.0 * a * a * sr * tr;

  const double k = 0.25 * l.thickness;
  Profile p;
  p.value = k * A * B;
  p.dy = k * (A1 * B + A * B1);
  p.dyy = k * (A2 * B + 2.0 * A1 * B1 + A * B2);
  return translate(x * std::tan(theta), std::tan(theta), p, m);
}

BedModel::BedModel(Shape shape, double x_left, double x_right)
    : shape_(std::move(shape)), x_left_(x_left), x_right_(x_right) {}

BedSample BedModel::eval(double x, double t) const {
  const double te = frozen_ ? *frozen_ : t;
  BedSample s = std::visit(
      [&](const auto& b) -> BedSample {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FlatBed>) return eval_flat(b, x, te);
        if constexpr (std::is_same_v<T, HammackBed>) return eval_hammack(b, x, te);
        if constexpr (std::is_same_v<T, WhittakerBed>) return eval_whittaker(b, x, te);
        if constexpr (std::is_same_v<T, LynettBed>) return eval_lynett(b, x, te);
      },
      shape_);
  if (frozen_) {
    s.d_t = 0.0;
    s.d_tt = 0.0;
    s.d_xt = 0.0;
  }
  return s;
}

std::string BedModel::name() const {
  static constexpr const char* names[] = {"flat", "hammack", "whittaker", "lynett"};
  return names[shape_.index()];
}

}  // namespace nhswe
