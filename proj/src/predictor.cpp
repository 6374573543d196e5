#include "nhswe/predictor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace nhswe {

namespace {

double safe_ratio(double num, double h, double h_min) { return h > h_min ? num / h : 0.0; }

struct Bounds {
  double lo;
  double hi;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

Flux3 physical_flux(const Conserved& q, double g, double h_min) {
  const double u = safe_ratio(q.hu, q.h, h_min);
  const double w = safe_ratio(q.hw, q.h, h_min);
  return {q.hu, q.hu * u + 0.5 * g * q.h * q.h, q.hu * w};
}

Flux3 rusanov_flux(const Conserved& l, const Conserved& r, double g, double h_min) {
  assert(l.h >= 0.0 && r.h >= 0.0);
  const Flux3 fl = physical_flux(l, g, h_min);
  const Flux3 fr = physical_flux(r, g, h_min);
  const double sl = std::abs(safe_ratio(l.hu, l.h, h_min)) + std::sqrt(g * std::max(l.h, 0.0));
  const double sr = std::abs(safe_ratio(r.hu, r.h, h_min)) + std::sqrt(g * std::max(r.h, 0.0));
  const double lambda = std::max(sl, sr);
  return {0.5 * (fl.h + fr.h) - 0.5 * lambda * (r.h - l.h),
          0.5 * (fl.hu + fr.hu) - 0.5 * lambda * (r.hu - l.hu),
          0.5 * (fl.hw + fr.hw) - 0.5 * lambda * (r.hw - l.hw)};
}

Conserved ghost_state(const Conserved& interior, BoundaryKind kind) {
  if (kind == BoundaryKind::Wall) return {interior.h, -interior.hu, interior.hw};
  return interior;
}

double clip_slope(double mean, double slope, double lo, double hi, double tol) {
  const double a = std::abs(slope);
  if (a == 0.0) return slope;
  if (mean + a <= hi + tol && mean - a >= lo - tol) return slope;
  double factor = 1.0;
  if (mean + a > hi) factor = std::min(factor, (hi - mean) / a);
  if (mean - a < lo) factor = std::min(factor, (mean - lo) / a);
  return std::max(factor, 0.0) * slope;
}

Predictor::Predictor(Mesh1D mesh, const BedModel& bed, BoundarySpec boundary,
                     PredictorSettings settings)
    : mesh_(std::move(mesh)), bed_(&bed), boundary_(boundary), settings_(settings) {}

Field Predictor::discrete_bed(double t) const {
  return interpolate_vertices([&](double x) { return bed_->depth(x, t); }, mesh_);
}

HydroState Predictor::still_water(double t, double eta0) const {
  HydroState s(mesh_.size());
  s.h = interpolate_vertices([&](double x) { return std::max(0.0, eta0 + bed_->depth(x, t)); },
                             mesh_);
  s.t = t;
  return s;
}

Tendency Predictor::hydrostatic_rhs(const HydroState& q, const Field& bed) const {
  const std::size_t n = mesh_.size();
  const double dx = mesh_.dx();
  const double g = settings_.g;
  const double h_min = settings_.h_min;

  // Interface fluxes at vertices 0..n.
  std::vector<Flux3> flux(n + 1);
  {
    const Conserved in = q.left_trace(0);
    flux[0] = rusanov_flux(ghost_state(in, boundary_.left), in, g, h_min);
  }
  for (std::size_t k = 1; k < n; ++k) {
    flux[k] = rusanov_flux(q.right_trace(k - 1), q.left_trace(k), g, h_min);
  }
  {
    const Conserved in = q.right_trace(n - 1);
    flux[n] = rusanov_flux(in, ghost_state(in, boundary_.right), g, h_min);
  }

  Tendency out{Field(n), Field(n), Field(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double bed_x = bed[i].gradient(dx);
    Flux3 volume;
    double source_mean = 0.0;
    double source_slope = 0.0;
    for (std::size_t qn = 0; qn < 2; ++qn) {
      const double xi = Quadrature::nodes[qn];
      const Conserved c = q.at(i, xi);
      const Flux3 f = physical_flux(c, g, h_min);
      volume.h += Quadrature::weights[qn] * f.h;
      volume.hu += Quadrature::weights[qn] * f.hu;
      volume.hw += Quadrature::weights[qn] * f.hw;
      const double s = 0.5 * dx * Quadrature::weights[qn] * g * c.h * bed_x;
      source_mean += s;
      source_slope += s * xi;
    }
    const Flux3& fl = flux[i];
    const Flux3& fr = flux[i + 1];
    const double inv_m0 = 1.0 / dx;
    const double inv_m1 = 3.0 / dx;
    out.h[i] = {(fl.h - fr.h) * inv_m0, (volume.h - fr.h - fl.h) * inv_m1};
    out.hu[i] = {(fl.hu - fr.hu + source_mean) * inv_m0,
                 (volume.hu - fr.hu - fl.hu + source_slope) * inv_m1};
    out.hw[i] = {(fl.hw - fr.hw) * inv_m0, (volume.hw - fr.hw - fl.hw) * inv_m1};
  }
  return out;
}

void Predictor::limit_and_dry(HydroState& q, const Field& bed) const {
  const std::size_t n = mesh_.size();
  const double h_min = settings_.h_min;
  const double tol = settings_.tvb_m * mesh_.dx() * mesh_.dx();

  const HydroState src = q;
  std::vector<char> dry(n);
  std::vector<double> u_mean(n, 0.0), w_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    dry[i] = src.h[i].mean < h_min;
    if (!dry[i]) {
      u_mean[i] = src.hu[i].mean / src.h[i].mean;
      w_mean[i] = src.hw[i].mean / src.h[i].mean;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    Modal& h = q.h[i];
    Modal& hu = q.hu[i];
    Modal& hw = q.hw[i];
    if (dry[i]) {
      h.mean = std::max(h.mean, 0.0);
      h.slope = 0.0;
      hu = {};
      hw = {};
      continue;
    }
    const bool has_left = i > 0;
    const bool has_right = i + 1 < n;
    const bool neighbour_dry = (has_left && dry[i - 1]) || (has_right && dry[i + 1]);
    const bool semi_dry = neighbour_dry || h.left() < h_min || h.right() < h_min;

    if (!semi_dry) {
      // Wet: limit the surface elevation so lake-at-rest is untouched.
      const double eta_mean = h.mean - bed[i].mean;
      Bounds b{eta_mean, eta_mean};
      if (has_left) b.include(src.h[i - 1].mean - bed[i - 1].mean);
      if (has_right) b.include(src.h[i + 1].mean - bed[i + 1].mean);
      const double eta_slope = clip_slope(eta_mean, h.slope - bed[i].slope, b.lo, b.hi, tol);
      h.slope = eta_slope + bed[i].slope;
    } else {
      Bounds b{h.mean, h.mean};
      if (has_left) b.include(src.h[i - 1].mean);
      if (has_right) b.include(src.h[i + 1].mean);
      h.slope = clip_slope(h.mean, h.slope, b.lo, b.hi, 0.0);
    }
    if (std::abs(h.slope) > h.mean) h.slope = std::copysign(h.mean, h.slope);

    // Velocity-based limiting of both momenta; the element means are kept.
    const double hbar = h.mean;
    const double hs_src = src.h[i].slope;
    // At a wall the mirrored ghost velocity -v also bounds the slope, so the
    // profile may pass through zero at the wall.
    auto limit_velocity = [&](Modal& m, const std::vector<double>& vel, bool mirrored) {
      const double v = vel[i];
      double v_slope = 0.0;
      if (!semi_dry) {
        Bounds b{v, v};
        if (has_left) b.include(vel[i - 1]);
        if (has_right) b.include(vel[i + 1]);
        const bool at_wall = (!has_left && boundary_.left == BoundaryKind::Wall) ||
                             (!has_right && boundary_.right == BoundaryKind::Wall);
        if (mirrored && at_wall) b.include(-v);
        // Bound the nodal velocities m/h rather than the slope of u alone: a
        // node much shallower than the mean amplifies the velocity deviation.
        const double amplify = hbar / std::min(h.left(), h.right());
        v_slope = clip_slope(v, amplify * (m.slope - v * hs_src) / hbar, b.lo, b.hi, tol) / amplify;
      }
      m.slope = hbar * v_slope + v * h.slope;
    };
    limit_velocity(hu, u_mean, true);
    limit_velocity(hw, w_mean, false);

    // A semi-dry element whose wet-side surface lies below the dry-side bed
    // elevation holds water at rest.
    const bool left_dry = h.left() < h_min;
    const bool right_dry = h.right() < h_min;
    if (left_dry != right_dry) {
      const double wet_eta = left_dry ? h.right() - bed[i].right() : h.left() - bed[i].left();
      const double dry_bed_elevation = left_dry ? -bed[i].left() : -bed[i].right();
      if (wet_eta <= dry_bed_elevation) {
        hu = {};
        hw = {};
      }
    }
  }
}

double Predictor::sponge_rate(std::size_t i) const {
  const double length = mesh_.x_right() - mesh_.x_left();
  const double width = settings_.sponge_fraction * length;
  if (width <= 0.0) return 0.0;
  const double x = mesh_.center(i);
  double xi = 0.0;
  if (boundary_.right == BoundaryKind::Sponge) {
    xi = std::max(xi, (x - (mesh_.x_right() - width)) / width);
  }
  if (boundary_.left == BoundaryKind::Sponge) {
    xi = std::max(xi, ((mesh_.x_left() + width) - x) / width);
  }
  xi = std::clamp(xi, 0.0, 1.0);
  return settings_.sponge_sigma0 * xi * xi;
}

void Predictor::relax_sponge(HydroState& q, const Field& bed, double dt) const {
  if (boundary_.left != BoundaryKind::Sponge && boundary_.right != BoundaryKind::Sponge) return;
  for (std::size_t i = 0; i < mesh_.size(); ++i) {
    const double sigma = sponge_rate(i);
    if (sigma <= 0.0) continue;
    const double a = 1.0 / (1.0 + dt * sigma);
    const double b = dt * sigma * a;
    const Modal rest =
        from_vertices(std::max(0.0, bed[i].left()), std::max(0.0, bed[i].right()));
    q.h[i] = {a * q.h[i].mean + b * rest.mean, a * q.h[i].slope + b * rest.slope};
    q.hu[i] = {a * q.hu[i].mean, a * q.hu[i].slope};
    q.hw[i] = {a * q.hw[i].mean, a * q.hw[i].slope};
  }
}

namespace {

struct SignalSpeed {
  double speed = 0.0;
  std::size_t element = 0;
};

SignalSpeed max_signal_speed(const HydroState& q, double g, double h_min) {
  SignalSpeed out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (double xi : {-1.0, 1.0}) {
      const Conserved c = q.at(i, xi);
      const double h = std::max(c.h, 0.0);
      const double s = std::abs(safe_ratio(c.hu, h, h_min)) + std::sqrt(g * h);
      if (s > out.speed) out = {s, i};
    }
  }
  return out;
}

}  // namespace

double Predictor::cfl_number(const HydroState& q, double dt) const {
  return max_signal_speed(q, settings_.g, settings_.h_min).speed * dt / mesh_.dx();
}

HydroState Predictor::rk2_step(const HydroState& q, double dt) const {
  const SignalSpeed fastest = max_signal_speed(q, settings_.g, settings_.h_min);
  const double cfl = fastest.speed * dt / mesh_.dx();
  if (cfl > settings_.cfl_max) {
    std::ostringstream msg;
    msg << "CFL number " << cfl << " exceeds " << settings_.cfl_max << " at t=" << q.t
        << " in element " << fastest.element << " (x=" << mesh_.center(fastest.element)
        << ", dt=" << dt << ", dx=" << mesh_.dx() << ")";
    throw CflViolation(msg.str());
  }
  const double t1 = q.t + dt;
  const Field bed0 = discrete_bed(q.t);
  const Field bed1 = bed_->frozen() ? bed0 : discrete_bed(t1);

  auto axpy = [](const Field& a, double s, const Field& b) {
    Field out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = {a[i].mean + s * b[i].mean, a[i].slope + s * b[i].slope};
    }
    return out;
  };
  auto average = [](const Field& a, const Field& b) {
    Field out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = {0.5 * a[i].mean + 0.5 * b[i].mean, 0.5 * a[i].slope + 0.5 * b[i].slope};
    }
    return out;
  };

  const Tendency k0 = hydrostatic_rhs(q, bed0);
  HydroState stage(q.size());
  stage.h = axpy(q.h, dt, k0.h);
  stage.hu = axpy(q.hu, dt, k0.hu);
  stage.hw = axpy(q.hw, dt, k0.hw);
  stage.t = t1;
  limit_and_dry(stage, bed1);
  relax_sponge(stage, bed1, dt);

  const Tendency k1 = hydrostatic_rhs(stage, bed1);
  HydroState out(q.size());
  out.h = average(q.h, axpy(stage.h, dt, k1.h));
  out.hu = average(q.hu, axpy(stage.hu, dt, k1.hu));
  out.hw = average(q.hw, axpy(stage.hw, dt, k1.hw));
  out.t = t1;
  limit_and_dry(out, bed1);
  relax_sponge(out, bed1, dt);
  return out;
}

}  // namespace nhswe
