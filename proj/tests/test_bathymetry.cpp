#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "nhswe/bathymetry.hpp"

using namespace nhswe;

namespace {

using Eval = std::function<BedSample(double, double)>;

void expect_close(double fd, double exact, double scale, const char* what, double x, double t) {
  const double denom = std::max(std::abs(exact), 1e-3 * scale);
  EXPECT_LT(std::abs(fd - exact) / denom, 1e-5) << what << " at x=" << x << " t=" << t
                                                << " fd=" << fd << " exact=" << exact;
}

void check_derivatives(const Eval& f, double x, double t, double scale) {
  const double e = 1e-5;
  const BedSample s = f(x, t);
  const BedSample xp = f(x + e, t), xm = f(x - e, t);
  const BedSample tp = f(x, t + e), tm = f(x, t - e);
  expect_close((xp.d - xm.d) / (2 * e), s.d_x, scale, "d_x", x, t);
  expect_close((tp.d - tm.d) / (2 * e), s.d_t, scale, "d_t", x, t);
  expect_close((xp.d_x - xm.d_x) / (2 * e), s.d_xx, scale, "d_xx", x, t);
  expect_close((tp.d_t - tm.d_t) / (2 * e), s.d_tt, scale, "d_tt", x, t);
  expect_close((xp.d_t - xm.d_t) / (2 * e), s.d_xt, scale, "d_xt from d_t", x, t);
  expect_close((tp.d_x - tm.d_x) / (2 * e), s.d_xt, scale, "d_xt from d_x", x, t);
}

}  // namespace

TEST(Hammack, InitialDepthAndRate) {
  HammackBed b;
  b.alpha = 8.611;
  const BedSample s = eval_hammack(b, 0.3, 0.0);
  EXPECT_DOUBLE_EQ(s.d, 0.05);
  EXPECT_NEAR(s.d_t, -b.zeta0 * b.alpha, 1e-12);
}

TEST(Hammack, LongTimeLimit) {
  HammackBed b;
  b.alpha = 8.611;
  EXPECT_NEAR(eval_hammack(b, 0.3, 50.0).d, 0.045, 1e-12);
  b.zeta0 = -0.005;
  EXPECT_NEAR(eval_hammack(b, -0.3, 50.0).d, 0.055, 1e-12);
}

TEST(Hammack, OutsidePlateIsStatic) {
  HammackBed b;
  b.alpha = 8.611;
  for (double t : {0.0, 0.1, 1.0, 10.0}) {
    const BedSample s = eval_hammack(b, 5.0, t);
    EXPECT_DOUBLE_EQ(s.d, 0.05);
    EXPECT_EQ(s.d_x, 0.0);
    EXPECT_EQ(s.d_t, 0.0);
    EXPECT_EQ(s.d_tt, 0.0);
    EXPECT_EQ(s.d_xt, 0.0);
    EXPECT_EQ(s.d_xx, 0.0);
  }
}

TEST(Hammack, Alpha) {
  const double tc_up = 0.148 * 0.61 / std::sqrt(9.81 * 0.05);
  EXPECT_NEAR(tc_up, 0.12890, 1e-5);
  EXPECT_NEAR(hammack_alpha(true, 0.05, 0.61, 9.81), 8.611, 5e-4);
  EXPECT_NEAR(hammack_alpha(false, 0.05, 0.61, 9.81), 13.704, 1e-3);
  EXPECT_NEAR(hammack_alpha(true, 0.05, 0.61, 9.81) * tc_up, 1.11, 1e-14);
}

TEST(Hammack, DerivativesMatchFiniteDifferences) {
  HammackBed b;
  b.alpha = 8.611;
  b.ramp_width = 0.05;
  const Eval f = [&](double x, double t) { return eval_hammack(b, x, t); };
  for (double x : {-0.62, -0.3, 0.0, 0.59, 0.6, 0.61, 0.63}) {
    for (double t : {0.02, 0.1, 0.4}) check_derivatives(f, x, t, 1.0);
  }
}

TEST(Whittaker, MotionLaw) {
  const WhittakerBed w;  // run 12
  EXPECT_NEAR(whittaker_motion(w, w.t1).s, 0.035643, 5e-7);
  // C1 at every switch time.
  for (double ts : {w.t1, w.t2, w.t3}) {
    const Kinematics a = whittaker_motion(w, ts - 1e-12);
    const Kinematics b = whittaker_motion(w, ts + 1e-12);
    EXPECT_NEAR(a.s, b.s, 1e-10);
    EXPECT_NEAR(a.v, b.v, 1e-10);
  }
  EXPECT_EQ(whittaker_motion(w, w.t3 + 0.5).v, 0.0);
}

TEST(Whittaker, CrestAndRestDepths) {
  const WhittakerBed w;
  for (double t : {0.0, 0.1, 1.0, 2.3}) {
    EXPECT_NEAR(eval_whittaker(w, whittaker_motion(w, t).s, t).d, 0.149, 1e-15);
  }
  for (double x : {-3.0, 0.0, 0.2, 1.5}) {
    const BedSample s = eval_whittaker(w, x, w.t3 + 0.1);
    EXPECT_EQ(s.d_t, 0.0);
    EXPECT_EQ(s.d_tt, 0.0);
    EXPECT_EQ(s.d_xt, 0.0);
  }
}

TEST(Whittaker, FootprintEdge) {
  // The quartic vanishes at |2(x - S)/L_s| = 1 but its slope does not:
  // d/dx of -H_s (1 - r^4) at r = 1 is 4 H_s (2 / L_s), so d_x jumps there.
  const WhittakerBed w;
  const double edge = 0.5 * w.slide_length;
  const BedSample inside = eval_whittaker(w, edge - 1e-12, 0.0);
  const BedSample outside = eval_whittaker(w, edge + 1e-12, 0.0);
  EXPECT_NEAR(inside.d, w.h0, 1e-12);
  EXPECT_DOUBLE_EQ(outside.d, w.h0);
  EXPECT_NEAR(inside.d_x - outside.d_x, 4.0 * w.slide_thickness * 2.0 / w.slide_length, 1e-9);
  EXPECT_NEAR(inside.d_x, 0.416, 1e-9);
  EXPECT_EQ(outside.d_x, 0.0);
  const BedSample at = eval_whittaker(w, edge, 0.0);
  EXPECT_DOUBLE_EQ(at.d, w.h0);
}

TEST(Whittaker, DerivativesMatchFiniteDifferences) {
  const WhittakerBed w;
  const Eval f = [&](double x, double t) { return eval_whittaker(w, x, t); };
  for (double t : {0.1, 1.0, 2.3}) {
    const double s = whittaker_motion(w, t).s;
    for (double y : {-0.2, -0.05, 0.0, 0.1, 0.22}) check_derivatives(f, s + y, t, 1.0);
  }
}

TEST(Lynett, MotionAndGeometry) {
  const LynettBed l;
  EXPECT_EQ(lynett_motion(l, 0.0).s, 0.0);
  EXPECT_NEAR(lynett_motion(l, 5.86).s, 4.712 * std::log(std::cosh(5.86 / 3.713)), 1e-12);
  EXPECT_NEAR(lynett_motion(l, 5.86).s, 4.367, 5e-4);
  EXPECT_NEAR(lynett_motion(l, 1.0).v, 4.712 / 3.713 * std::tanh(1.0 / 3.713), 1e-14);

  // Slide centred at x0 at t = 0: the bump is symmetric about it.
  const BedSample a = eval_lynett(l, l.x0 - 0.3, 0.0);
  const BedSample b = eval_lynett(l, l.x0 + 0.3, 0.0);
  const double tan6 = std::tan(6.0 * std::numbers::pi / 180.0);
  EXPECT_NEAR(a.d - (l.x0 - 0.3) * tan6, b.d - (l.x0 + 0.3) * tan6, 1e-14);

  const BedSample far = eval_lynett(l, 35.0, 0.0);
  EXPECT_NEAR(far.d_x, 0.1051, 5e-5);
  EXPECT_NEAR(far.d, 35.0 * tan6, 1e-12);
}

TEST(Lynett, DerivativesMatchFiniteDifferences) {
  const LynettBed l;
  const Eval f = [&](double x, double t) { return eval_lynett(l, x, t); };
  for (double t : {0.5, 3.0, 5.86}) {
    for (double x : {-1.0, 1.5, 2.379, 3.0, 5.0, 7.0}) check_derivatives(f, x, t, 1.0);
  }
}

TEST(BedModel, FlatIsStatic) {
  const BedModel m(FlatBed{0.7}, 0.0, 1.0);
  const BedSample s = m.eval(0.4, 3.0);
  EXPECT_EQ(s.d, 0.7);
  EXPECT_EQ(s.d_x, 0.0);
  EXPECT_EQ(s.d_t, 0.0);
  EXPECT_EQ(s.d_tt, 0.0);
  EXPECT_EQ(s.d_xt, 0.0);
  EXPECT_EQ(s.d_xx, 0.0);
  EXPECT_EQ(m.name(), "flat");
}

TEST(BedModel, FrozenHasNoTimeDerivatives) {
  BedModel m(LynettBed{}, -2.0, 40.0);
  m.freeze_at(1.0);
  const BedSample s = m.eval(2.5, 3.0);
  const BedSample ref = eval_lynett(LynettBed{}, 2.5, 1.0);
  EXPECT_EQ(s.d, ref.d);
  EXPECT_EQ(s.d_x, ref.d_x);
  EXPECT_EQ(s.d_t, 0.0);
  EXPECT_EQ(s.d_tt, 0.0);
  EXPECT_EQ(s.d_xt, 0.0);
}

TEST(BedModel, FiniteOverDomain) {
  HammackBed hb;
  hb.alpha = 8.611;
  const BedModel models[] = {BedModel(hb, 0.0, 31.6), BedModel(WhittakerBed{}, -7.33, 7.33),
                             BedModel(LynettBed{}, -2.0, 40.0)};
  for (const BedModel& m : models) {
    for (int i = 0; i <= 200; ++i) {
      const double x = m.x_left() + (m.x_right() - m.x_left()) * i / 200.0;
      for (double t : {0.0, 0.7, 3.0, 100.0}) {
        const BedSample s = m.eval(x, t);
        for (double v : {s.d, s.d_x, s.d_t, s.d_tt, s.d_xt, s.d_xx}) EXPECT_TRUE(std::isfinite(v));
      }
    }
  }
}
