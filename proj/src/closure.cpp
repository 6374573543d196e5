#include "nhswe/closure.hpp"

#include <stdexcept>

namespace nhswe {

ClosureKind parse_closure(std::string_view name) {
  if (name == "hydrostatic") return ClosureKind::Hydrostatic;
  if (name == "linear") return ClosureKind::Linear;
  if (name == "quad-simple") return ClosureKind::QuadSimple;
  if (name == "quad-full") return ClosureKind::QuadFull;
  throw std::invalid_argument("unknown closure '" + std::string(name) +
                              "' (expected hydrostatic|linear|quad-simple|quad-full)");
}

std::string to_string(ClosureKind kind) {
  switch (kind) {
    case ClosureKind::Hydrostatic: return "hydrostatic";
    case ClosureKind::Linear: return "linear";
    case ClosureKind::QuadSimple: return "quad-simple";
    case ClosureKind::QuadFull: return "quad-full";
  }
  return "?";
}

double phi(double h, double hu, double eta_x, const BedSample& bed, const PhysParams& params,
           double h_min) {
  if (h < h_min) return 0.0;
  const double u = hu / h;
  const double forcing = params.g * bed.d_x * eta_x - bed.d_tt - 2.0 * u * bed.d_xt -
                         u * u * bed.d_xx;
  return params.rho * h / (4.0 + bed.d_x * bed.d_x) * forcing;
}

ClosureTerms closure_terms(ClosureKind kind, double d_x, double phi_value) {
  switch (kind) {
    case ClosureKind::Hydrostatic: return {};
    case ClosureKind::Linear: return {2.0, 0.0, 0.0};
    case ClosureKind::QuadSimple: return {1.5, 0.0, 0.0};
    case ClosureKind::QuadFull: {
      const double denom = 4.0 + d_x * d_x;
      return {6.0 / denom, d_x / denom, phi_value};
    }
  }
  return {};
}

double bottom_pressure(ClosureKind kind, double p, double hp_x, const BedSample& bed,
                       double phi_value) {
  if (kind == ClosureKind::Hydrostatic) {
    throw std::invalid_argument("bottom_pressure: hydrostatic closure has no bed pressure");
  }
  const ClosureTerms t = closure_terms(kind, bed.d_x, phi_value);
  return t.a * p + t.b * hp_x + t.c;
}

}  // namespace nhswe
