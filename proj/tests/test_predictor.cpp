#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nhswe/predictor.hpp"

using namespace nhswe;

namespace {

PredictorSettings settings(double tvb_m = 0.1) {
  PredictorSettings s;
  s.tvb_m = tvb_m;
  return s;
}

double mass(const HydroState& q, const Mesh1D& m) { return integral(q.h, m); }

double min_nodal_h(const HydroState& q) {
  double v = INFINITY;
  for (std::size_t i = 0; i < q.size(); ++i) {
    v = std::min({v, q.h[i].left(), q.h[i].right(), q.h[i].at(Quadrature::nodes[0]),
                  q.h[i].at(Quadrature::nodes[1])});
  }
  return v;
}

}  // namespace

TEST(Rusanov, Consistency) {
  const Flux3 f = rusanov_flux({1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, 9.81);
  EXPECT_EQ(f.h, 0.0);
  EXPECT_DOUBLE_EQ(f.hu, 4.905);
  EXPECT_EQ(f.hw, 0.0);

  const Conserved q{0.7, -0.3, 0.2};
  const Flux3 a = rusanov_flux(q, q, 9.81);
  const Flux3 b = physical_flux(q, 9.81, 1e-6);
  EXPECT_DOUBLE_EQ(a.h, b.h);
  EXPECT_DOUBLE_EQ(a.hu, b.hu);
  EXPECT_DOUBLE_EQ(a.hw, b.hw);
}

TEST(Rusanov, DepthJump) {
  // lambda = max(sqrt(9.81), sqrt(9.81 * 0.5)) = sqrt(9.81)
  const Flux3 f = rusanov_flux({1.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, 9.81);
  const double lambda = std::sqrt(9.81);
  EXPECT_NEAR(f.h, 0.25 * lambda, 1e-15);
  EXPECT_NEAR(f.h, 0.783023, 1e-6);
  EXPECT_NEAR(f.hu, 0.5 * (4.905 + 1.22625), 1e-15);
  EXPECT_EQ(f.hw, 0.0);
}

TEST(Rusanov, DryDry) {
  const Flux3 f = rusanov_flux({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 9.81);
  EXPECT_EQ(f.h, 0.0);
  EXPECT_EQ(f.hu, 0.0);
  EXPECT_EQ(f.hw, 0.0);
}

TEST(Ghost, WallAndSponge) {
  const Conserved w = ghost_state({1.0, 0.3, 0.0}, BoundaryKind::Wall);
  EXPECT_EQ(w.h, 1.0);
  EXPECT_EQ(w.hu, -0.3);
  EXPECT_EQ(w.hw, 0.0);
  const Conserved s = ghost_state({1.0, 0.3, 0.1}, BoundaryKind::Sponge);
  EXPECT_EQ(s.hu, 0.3);
  EXPECT_EQ(s.hw, 0.1);
}

TEST(ClipSlope, BarthJespersen) {
  EXPECT_EQ(clip_slope(1.0, 0.5, 0.0, 2.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(clip_slope(1.0, 0.5, 0.0, 1.2, 0.0), 0.2);
  EXPECT_DOUBLE_EQ(clip_slope(1.0, -0.5, 0.9, 2.0, 0.0), -0.1);
  EXPECT_EQ(clip_slope(1.0, 0.5, 1.0, 1.0, 0.0), 0.0);
  EXPECT_EQ(clip_slope(1.0, 0.5, 0.0, 1.4, 0.2), 0.5);  // within tolerance
}

TEST(HydrostaticRhs, LakeAtRestOnBeach) {
  // Wet part of the beach, slide included; the shoreline element is covered
  // by the limiter's at-rest rule (see Rk2.LakeAtRestWithShoreline).
  BedModel bed(LynettBed{}, 0.5, 40.0);
  bed.freeze_at(0.0);
  const Predictor p(Mesh1D(0.5, 40.0, 395), bed, {BoundaryKind::Wall, BoundaryKind::Sponge},
                    settings());
  const HydroState q = p.still_water(0.0);
  const Tendency k = p.hydrostatic_rhs(q, p.discrete_bed(0.0));
  double scale = 0.0;
  for (const Modal& h : q.h) scale = std::max(scale, 0.5 * 9.81 * h.mean * h.mean);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_LT(std::abs(k.hu[i].mean), 1e-12 * scale) << "element " << i;
    EXPECT_LT(std::abs(k.h[i].mean), 1e-12 * scale) << "element " << i;
  }
}

TEST(HydrostaticRhs, ConstantStateOnFlatBed) {
  const BedModel bed(FlatBed{1.0}, 0.0, 10.0);
  const Predictor p(Mesh1D(0.0, 10.0, 20), bed, {BoundaryKind::Sponge, BoundaryKind::Sponge},
                    settings());
  HydroState q(20);
  for (std::size_t i = 0; i < 20; ++i) {
    q.h[i] = {1.0, 0.0};
    q.hu[i] = {0.2, 0.0};
    q.hw[i] = {0.05, 0.0};
  }
  const Tendency k = p.hydrostatic_rhs(q, p.discrete_bed(0.0));
  for (std::size_t i = 0; i < 20; ++i) {
    for (const Field* f : {&k.h, &k.hu, &k.hw}) {
      EXPECT_NEAR((*f)[i].mean, 0.0, 1e-13);
      EXPECT_NEAR((*f)[i].slope, 0.0, 1e-13);
    }
  }
}

TEST(Limiter, DryElementIsZeroed) {
  const BedModel bed(FlatBed{1.0}, 0.0, 3.0);
  const Predictor p(Mesh1D(0.0, 3.0, 3), bed, {}, settings());
  HydroState q(3);
  for (std::size_t i = 0; i < 3; ++i) q.h[i] = {1.0, 0.0};
  q.h[1] = {1e-9, 1e-9};
  q.hu[1] = {1e-6, 0.0};
  q.hw[1] = {1e-7, 1e-8};
  p.limit_and_dry(q, p.discrete_bed(0.0));
  EXPECT_EQ(q.h[1].mean, 1e-9);
  EXPECT_EQ(q.h[1].slope, 0.0);
  EXPECT_EQ(q.hu[1], Modal{});
  EXPECT_EQ(q.hw[1], Modal{});
}

TEST(Limiter, SmoothWaveUntouched) {
  const BedModel bed(FlatBed{1.0}, 0.0, 10.0);
  const Mesh1D mesh(0.0, 10.0, 100);
  const Predictor p(mesh, bed, {}, settings());
  const double k = 2.0 * std::numbers::pi / 10.0;
  HydroState q(mesh.size());
  q.h = project([&](double x) { return 1.0 + 0.01 * std::sin(k * x); }, mesh);
  q.hu = project([&](double x) { return 0.02 * std::sin(k * x); }, mesh);
  q.hw = project([&](double x) { return 0.001 * std::cos(k * x); }, mesh);
  HydroState limited = q;
  p.limit_and_dry(limited, p.discrete_bed(0.0));
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    EXPECT_EQ(limited.h[i].mean, q.h[i].mean);
    EXPECT_LT(std::abs(limited.h[i].slope - q.h[i].slope), 1e-12);
    EXPECT_LT(std::abs(limited.hu[i].slope - q.hu[i].slope), 1e-12);
    EXPECT_LT(std::abs(limited.hw[i].slope - q.hw[i].slope), 1e-12);
  }
}

TEST(Limiter, NegativeNodeClampedToZero) {
  const BedModel bed(FlatBed{1.0}, 0.0, 3.0);
  const Predictor p(Mesh1D(0.0, 3.0, 3), bed, {}, settings());
  HydroState q(3);
  q.h[0] = {0.0, 0.0};
  q.h[1] = {0.01, 0.02};
  q.h[2] = {0.03, 0.0};
  p.limit_and_dry(q, p.discrete_bed(0.0));
  EXPECT_EQ(q.h[1].mean, 0.01);
  EXPECT_NEAR(q.h[1].left(), 0.0, 1e-18);
  EXPECT_GE(q.h[1].left(), 0.0);
}

TEST(Limiter, PositivityAndMeansOnRoughData) {
  BedModel bed(LynettBed{}, -2.0, 40.0);
  bed.freeze_at(0.0);
  const Mesh1D mesh(-2.0, 40.0, 84);
  const Predictor p(mesh, bed, {BoundaryKind::Wall, BoundaryKind::Sponge}, settings());
  HydroState q = p.still_water(0.0, 0.05);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q.h[i].slope += 0.3 * std::sin(7.0 * i) * (q.h[i].mean + 0.01);
    q.hu[i] = {0.1 * std::cos(3.0 * i) * q.h[i].mean, 0.05 * std::sin(5.0 * i)};
  }
  const HydroState before = q;
  p.limit_and_dry(q, p.discrete_bed(0.0));
  EXPECT_GE(min_nodal_h(q), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_EQ(q.h[i].mean, std::max(before.h[i].mean, 0.0));
  }
}

TEST(Rk2, StillWaterOnFlatBed) {
  const BedModel bed(FlatBed{0.5}, 0.0, 4.0);
  const Predictor p(Mesh1D(0.0, 4.0, 40), bed, {}, settings());
  HydroState q = p.still_water(0.0);
  const HydroState q0 = q;
  for (int s = 0; s < 50; ++s) q = p.rk2_step(q, 0.01);
  for (std::size_t i = 0; i < q.size(); ++i) {
    EXPECT_NEAR(q.h[i].mean, q0.h[i].mean, 1e-15);
    EXPECT_NEAR(q.hu[i].mean, 0.0, 1e-15);
    EXPECT_NEAR(q.hu[i].slope, 0.0, 1e-15);
  }
  EXPECT_NEAR(q.t, 0.5, 1e-14);
}

TEST(Rk2, LakeAtRestWithShoreline) {
  BedModel bed(LynettBed{}, -2.0, 40.0);
  bed.freeze_at(0.0);
  const Predictor p(Mesh1D(-2.0, 40.0, 420), bed, {BoundaryKind::Wall, BoundaryKind::Sponge},
                    settings());
  HydroState q = p.still_water(0.0);
  for (int s = 0; s < 100; ++s) q = p.rk2_step(q, 0.005);
  double max_hu = 0.0;
  for (const Modal& m : q.hu) max_hu = std::max({max_hu, std::abs(m.left()), std::abs(m.right())});
  EXPECT_LT(max_hu, 1e-12);
}

TEST(Rk2, MassConservedBetweenWalls) {
  BedModel bed(LynettBed{}, -2.0, 20.0);
  bed.freeze_at(0.0);
  const Mesh1D mesh(-2.0, 20.0, 220);
  const Predictor p(mesh, bed, {}, settings());
  HydroState q = p.still_water(0.0);
  // Hump of water that runs up the beach.
  const Field hump =
      project([](double x) { return 0.02 * std::exp(-(x - 8.0) * (x - 8.0)); }, mesh);
  for (std::size_t i = 0; i < q.size(); ++i) {
    q.h[i].mean += hump[i].mean;
    q.h[i].slope += hump[i].slope;
  }
  const double m0 = mass(q, mesh);
  for (int s = 0; s < 1200; ++s) {
    const double before = mass(q, mesh);
    q = p.rk2_step(q, 0.005);
    EXPECT_LT(std::abs(mass(q, mesh) - before) / before, 1e-12) << "step " << s;
  }
  EXPECT_LT(std::abs(mass(q, mesh) - m0) / m0, 1e-12);
  EXPECT_GE(min_nodal_h(q), 0.0);
}

TEST(Rk2, SecondOrderSelfConvergence) {
  const BedModel bed(FlatBed{1.0}, 0.0, 10.0);
  const double k = std::numbers::pi / 10.0;
  std::vector<Field> h;
  std::vector<Mesh1D> meshes;
  for (std::size_t n : {25, 50, 100, 200}) {
    const Mesh1D mesh(0.0, 10.0, n);
    const Predictor p(mesh, bed, {}, settings());
    HydroState q(n);
    q.h = project([&](double x) { return 1.0 + 0.01 * std::cos(k * x); }, mesh);
    const double dt = 0.4 / static_cast<double>(n);
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int s = 0; s < steps; ++s) q = p.rk2_step(q, dt);
    h.push_back(q.h);
    meshes.push_back(mesh);
  }
  std::vector<double> err;
  for (std::size_t l = 0; l + 1 < h.size(); ++l) {
    err.push_back(l2_difference_refined(h[l], meshes[l], h[l + 1], meshes[l + 1]));
  }
  for (std::size_t l = 0; l + 1 < err.size(); ++l) {
    EXPECT_GE(std::log2(err[l] / err[l + 1]), 1.8) << "level " << l;
  }
}

TEST(Rk2, CflGuard) {
  const BedModel bed(FlatBed{1.0}, 0.0, 1.0);
  const Predictor p(Mesh1D(0.0, 1.0, 10), bed, {}, settings());
  const HydroState q = p.still_water(0.0);
  EXPECT_NEAR(p.cfl_number(q, 0.01), std::sqrt(9.81) * 0.1, 1e-12);
  EXPECT_THROW(p.rk2_step(q, 0.1), CflViolation);
}

TEST(Sponge, RateAndRelaxation) {
  const BedModel bed(FlatBed{1.0}, 0.0, 10.0);
  PredictorSettings s = settings();
  s.sponge_sigma0 = 100.0;
  const Predictor p(Mesh1D(0.0, 10.0, 100), bed, {BoundaryKind::Wall, BoundaryKind::Sponge}, s);
  for (std::size_t i = 0; i < 90; ++i) EXPECT_EQ(p.sponge_rate(i), 0.0);
  EXPECT_GT(p.sponge_rate(90), 0.0);
  EXPECT_NEAR(p.sponge_rate(99), 100.0 * 0.95 * 0.95, 1e-9);

  HydroState q = p.still_water(0.0, 0.1);
  for (Modal& m : q.hu) m = {0.3, 0.0};
  p.relax_sponge(q, p.discrete_bed(0.0), 0.01);
  EXPECT_EQ(q.hu[50].mean, 0.3);
  EXPECT_LT(q.hu[99].mean, 0.3 / 1.5);
  EXPECT_LT(q.h[99].mean, 1.1);
  EXPECT_GT(q.h[99].mean, 1.0);
}
