#include "nhswe/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhswe {

std::vector<WetRange> wet_ranges(const Field& h, double min_depth) {
  std::vector<WetRange> out;
  const std::size_t n = h.size();
  std::size_t i = 0;
  while (i < n) {
    auto wet = [&](std::size_t k) { return h[k].left() >= min_depth && h[k].right() >= min_depth; };
    if (!wet(i)) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i < n && wet(i)) ++i;
    out.push_back({first, i});
  }
  return out;
}

NodePair corrected_hw(ClosureKind kind, const std::array<CorrectorInput, 2>& in, const Modal& p,
                      const Modal& dp, double dt, const PhysParams& params) {
  NodePair out{};
  for (std::size_t q = 0; q < 2; ++q) {
    const double xi = Quadrature::nodes[q];
    const double pv = p.at(xi);
    const double hp_x = in[q].h * dp.at(xi) + in[q].h_x * pv;
    const double pb = bottom_pressure(kind, pv, hp_x, in[q].bed, in[q].phi);
    out[q] = in[q].hw + dt / params.rho * pb;
  }
  return out;
}

NodeResidual momentum_residual(ClosureKind kind, const CorrectorInput& in, double p, double dp,
                               double hu_new, double dt, const PhysParams& params) {
  const double hp_x = in.h * dp + in.h_x * p;
  const double rate = (hu_new - in.hu) / dt;
  const double gradient = hp_x / params.rho;
  const double bed_term = in.bed.d_x / params.rho * bottom_pressure(kind, p, hp_x, in.bed, in.phi);
  return {std::abs(rate + gradient - bed_term),
          std::max({std::abs(rate), std::abs(gradient), std::abs(bed_term)})};
}

Stepper::Stepper(const Predictor& predictor, StepperSettings settings)
    : predictor_(&predictor), settings_(settings) {}

StepResult Stepper::step(const HydroState& state, double dt) const {
  return correct(predictor_->rk2_step(state, dt), dt);
}

StepResult Stepper::correct(const HydroState& predicted, double dt) const {
  const Mesh1D& mesh = predictor_->mesh();
  const BedModel& model = predictor_->bed_model();
  const double dx = mesh.dx();
  const double h_min = predictor_->settings().h_min;
  const double t = predicted.t;
  const ClosureKind kind = settings_.closure;
  const PhysParams& phys = settings_.phys;

  StepResult out{predicted, Field(mesh.size()), {}};
  if (kind == ClosureKind::Hydrostatic) return out;

  const Field bed = predictor_->discrete_bed(t);
  const double min_depth = std::max(settings_.nh_min_depth, h_min);
  const std::vector<WetRange> ranges = wet_ranges(predicted.h, min_depth);

  StepDiagnostics& diag = out.diag;
  diag.min_h1 = std::numeric_limits<double>::infinity();
  diag.min_h2 = std::numeric_limits<double>::infinity();
  diag.subdomains = ranges.size();
  double residual_max = 0.0;
  double residual_scale = 0.0;

  for (const WetRange& range : ranges) {
    const std::size_t m = range.last - range.first;
    diag.wet_elements += m;

    std::vector<std::array<CorrectorInput, 2>> inputs(m);
    for (std::size_t e = 0; e < m; ++e) {
      const std::size_t i = range.first + e;
      const double h_x = predicted.h[i].gradient(dx);
      const double eta_x = h_x - bed[i].gradient(dx);
      for (std::size_t q = 0; q < 2; ++q) {
        const double xi = Quadrature::nodes[q];
        CorrectorInput& in = inputs[e][q];
        in.h = predicted.h[i].at(xi);
        in.h_x = h_x;
        in.hu = predicted.hu[i].at(xi);
        in.hw = predicted.hw[i].at(xi);
        in.bed = model.eval(mesh.quad_point(i, q), t);
        in.phi = kind == ClosureKind::QuadFull ? phi(in.h, in.hu, eta_x, in.bed, phys, h_min) : 0.0;
      }
    }
    std::vector<CorrectorInput> vertex_inputs(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      const std::size_t v = range.first + k;
      const double left = k > 0 ? predicted.h[v - 1].right() : predicted.h[v].left();
      const double right = k < m ? predicted.h[v].left() : predicted.h[v - 1].right();
      vertex_inputs[k].h = std::max(left, right);
      vertex_inputs[k].bed = model.eval(mesh.vertex(v), t);
    }

    const EllipticCoefficients coeffs =
        build_coefficients(kind, inputs, vertex_inputs, dt, phys, min_depth);
    for (std::size_t e = 0; e < m; ++e) {
      for (std::size_t q = 0; q < 2; ++q) {
        diag.max_g_sum = std::max(diag.max_g_sum, std::abs(coeffs.g1[e][q] + coeffs.g2[e][q]));
        diag.min_h1 = std::min(diag.min_h1, coeffs.h1[e][q]);
        diag.min_h2 = std::min(diag.min_h2, coeffs.h2[e][q]);
      }
    }

    auto boundary = [&](bool at_domain_edge, BoundaryKind kind_at_edge) {
      if (at_domain_edge && kind_at_edge == BoundaryKind::Wall) return EllipticBoundary::momentum();
      return EllipticBoundary::pressure();
    };
    const EllipticBoundary left = boundary(range.first == 0, predictor_->boundary().left);
    const EllipticBoundary right = boundary(range.last == mesh.size(), predictor_->boundary().right);

    const EllipticSystem system = assemble_ldg(coeffs, dx, left, right, settings_.penalty);
    const EllipticSolution sol = solve(system);
    diag.solve_residual = std::max(diag.solve_residual, sol.residual);
    const LiftedDerivatives lifted =
        lifted_derivatives(sol.p, sol.hu, coeffs.face_scale, dx, left, right, settings_.penalty);

    for (std::size_t e = 0; e < m; ++e) {
      const std::size_t i = range.first + e;
      const NodePair hw = corrected_hw(kind, inputs[e], sol.p[e], lifted.dp[e], dt, phys);
      out.state.hu[i] = sol.hu[e];
      out.state.hw[i] = from_nodes(hw[0], hw[1]);
      out.p[i] = sol.p[e];
      if (settings_.check_residual) {
        for (std::size_t q = 0; q < 2; ++q) {
          const double xi = Quadrature::nodes[q];
          const NodeResidual r = momentum_residual(kind, inputs[e][q], sol.p[e].at(xi),
                                                   lifted.dp[e].at(xi), sol.hu[e].at(xi), dt, phys);
          residual_max = std::max(residual_max, r.residual);
          residual_scale = std::max(residual_scale, r.scale);
        }
      }
    }
  }
  if (ranges.empty()) diag.min_h1 = diag.min_h2 = 0.0;
  diag.corrector_residual = residual_scale > 0.0 ? residual_max / residual_scale : 0.0;

  predictor_->limit_and_dry(out.state, bed);
  return out;
}

}  // namespace nhswe
