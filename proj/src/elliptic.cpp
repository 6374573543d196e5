#include "nhswe/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nhswe {

namespace {

constexpr std::size_t kDofs = 4;  // p mean, p slope, u mean, u slope
constexpr std::size_t kBand = 2 * kDofs - 1;

std::size_t p_dof(std::size_t e, std::size_t k) { return kDofs * e + k; }
std::size_t u_dof(std::size_t e, std::size_t k) { return kDofs * e + 2 + k; }

// Trace slots of a face flux: p^-, u^-, p^+, u^+.
enum Trace : std::size_t { kPm, kUm, kPp, kUp };

/// Flux pair at one vertex as affine functions of the four traces.
struct FaceFlux {
  std::array<double, 4> p{};
  std::array<double, 4> u{};
  double p0 = 0.0;
  double u0 = 0.0;
};

/// Fluxes at all n+1 vertices of an n-element subdomain.
std::vector<FaceFlux> face_fluxes(std::size_t n, const std::vector<double>& scale,
                                  EllipticBoundary left, EllipticBoundary right,
                                  const FluxPenalty& pen) {
  std::vector<FaceFlux> faces(n + 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double a = pen.tau_u * scale[k];
    const double b = pen.tau_p / scale[k];
    faces[k].p = {1.0, a, 0.0, -a};
    faces[k].u = {b, 0.0, -b, 1.0};
  }

  FaceFlux& fl = faces[0];
  const double al = pen.tau_u * scale[0];
  const double bl = pen.tau_p / scale[0];
  if (left.kind == EllipticBoundary::Kind::Momentum) {
    fl.u0 = left.value;
    fl.p = {0.0, 0.0, 1.0, -al};
    fl.p0 = al * left.value;
  } else {
    fl.p0 = left.value;
    fl.u = {0.0, 0.0, -bl, 1.0};
    fl.u0 = bl * left.value;
  }

  FaceFlux& fr = faces[n];
  const double ar = pen.tau_u * scale[n];
  const double br = pen.tau_p / scale[n];
  if (right.kind == EllipticBoundary::Kind::Momentum) {
    fr.u0 = right.value;
    fr.p = {1.0, ar, 0.0, 0.0};
    fr.p0 = -ar * right.value;
  } else {
    fr.p0 = right.value;
    fr.u = {br, 1.0, 0.0, 0.0};
    fr.u0 = -br * right.value;
  }
  return faces;
}

/// Element and trace sign (+1 right trace, -1 left trace) of a slot at
/// vertex f.
std::size_t slot_element(std::size_t f, std::size_t slot) { return slot < 2 ? f - 1 : f; }
double slot_sign(std::size_t slot) { return slot < 2 ? 1.0 : -1.0; }
std::size_t slot_dof(std::size_t f, std::size_t slot) {
  const std::size_t e = slot_element(f, slot);
  return slot % 2 == 0 ? p_dof(e, 0) : u_dof(e, 0);
}

double flux_value(const std::array<double, 4>& coef, double constant, std::size_t f,
                  const Field& p, const Field& u) {
  double v = constant;
  for (std::size_t s = 0; s < 4; ++s) {
    if (coef[s] == 0.0) continue;
    const Modal& m = (s % 2 == 0 ? p : u)[slot_element(f, s)];
    v += coef[s] * (m.mean + slot_sign(s) * m.slope);
  }
  return v;
}

}  // namespace

PointCoefficients point_coefficients(ClosureKind kind, const CorrectorInput& in, double dt,
                                     const PhysParams& params) {
  const double h = in.h;
  const double hx = in.h_x;
  const double dx = in.bed.d_x;
  const double rho = params.rho;
  PointCoefficients c{};
  switch (kind) {
    case ClosureKind::QuadFull: {
      const double geo = 4.0 + dx * dx;
      c.g1 = (2.0 * hx - 3.0 * dx) / (2.0 * h);
      c.g2 = (3.0 * dx - 2.0 * hx) / (2.0 * h);
      c.h1 = rho * geo / (4.0 * dt * h);
      c.h2 = 3.0 * dt / (rho * h);
      c.f1 = geo / (4.0 * h) * (in.phi * dx + rho / dt * in.hu);
      c.f2 = -2.0 * in.bed.d_t - 2.0 * in.hw / h - dx * in.hu / (2.0 * h) -
             dt * geo / (2.0 * rho * h) * in.phi;
      break;
    }
    case ClosureKind::QuadSimple: {
      // Same expression layout as the full closure so both agree bit for bit
      // on a flat static bed.
      c.g1 = (2.0 * hx - 3.0 * dx) / (2.0 * h);
      c.g2 = (2.0 * dx - hx) / h;
      c.h1 = rho * 4.0 / (4.0 * dt * h);
      c.h2 = 3.0 * dt / (rho * h);
      c.f1 = 4.0 / (4.0 * h) * (rho / dt * in.hu);
      c.f2 = -2.0 * in.bed.d_t - 2.0 * in.hw / h;
      break;
    }
    case ClosureKind::Linear: {
      c.g1 = (hx - 2.0 * dx) / h;
      c.g2 = (2.0 * dx - hx) / h;
      c.h1 = rho / (dt * h);
      c.h2 = 4.0 * dt / (rho * h);
      c.f1 = 1.0 / h * (rho / dt * in.hu);
      c.f2 = -2.0 * in.bed.d_t - 2.0 * in.hw / h;
      break;
    }
    case ClosureKind::Hydrostatic:
      throw std::invalid_argument("point_coefficients: hydrostatic closure has no pressure system");
  }
  return c;
}

EllipticCoefficients build_coefficients(ClosureKind kind,
                                        const std::vector<std::array<CorrectorInput, 2>>& inputs,
                                        const std::vector<CorrectorInput>& vertex_inputs,
                                        double dt, const PhysParams& params, double h_min) {
  const std::size_t n = inputs.size();
  if (vertex_inputs.size() != n + 1) {
    throw std::invalid_argument("build_coefficients: need one vertex input per vertex");
  }
  EllipticCoefficients c(n);
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t q = 0; q < 2; ++q) {
      const CorrectorInput& in = inputs[e][q];
      if (!(in.h >= h_min)) {
        std::ostringstream msg;
        msg << "build_coefficients: depth " << in.h << " below " << h_min << " at element " << e
            << " node " << q;
        throw EllipticAssemblyError(msg.str());
      }
      const PointCoefficients pc = point_coefficients(kind, in, dt, params);
      c.g1[e][q] = pc.g1;
      c.g2[e][q] = pc.g2;
      c.h1[e][q] = pc.h1;
      c.h2[e][q] = pc.h2;
      c.f1[e][q] = pc.f1;
      c.f2[e][q] = pc.f2;
    }
  }
  for (std::size_t k = 0; k <= n; ++k) {
    CorrectorInput in = vertex_inputs[k];
    in.h = std::max(in.h, h_min);
    const PointCoefficients pc = point_coefficients(kind, in, dt, params);
    c.face_scale[k] = std::sqrt(pc.h1 / pc.h2);
  }
  return c;
}

EllipticSystem assemble_ldg(const EllipticCoefficients& coeffs, double dx, EllipticBoundary left,
                            EllipticBoundary right, const FluxPenalty& penalty) {
  const std::size_t n = coeffs.size();
  if (n == 0) throw std::invalid_argument("assemble_ldg: empty subdomain");
  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t q = 0; q < 2; ++q) {
      if (!(coeffs.h1[e][q] > 0.0 && coeffs.h2[e][q] > 0.0)) {
        std::ostringstream msg;
        msg << "assemble_ldg: h1, h2 must be positive (element " << e << ")";
        throw EllipticAssemblyError(msg.str());
      }
    }
  }

  EllipticSystem sys{BandedMatrix(kDofs * n, kBand, kBand), std::vector<double>(kDofs * n, 0.0),
                     n, penalty.tau_u == 0.0};
  const std::vector<FaceFlux> faces = face_fluxes(n, coeffs.face_scale, left, right, penalty);

  // Weak derivative rows: int a_x phi_k = a_hat(R) - a_hat(L) for the mean
  // and a_hat(R) + a_hat(L) - 2 a_mean for the slope.
  auto add_flux = [&](std::size_t row, std::size_t f, double side,
                      const std::array<double, 4>& coef, double constant) {
    for (std::size_t s = 0; s < 4; ++s) {
      const double c = coef[s];
      if (c == 0.0) continue;
      const std::size_t col = slot_dof(f, s);
      const double cs = c * slot_sign(s);
      sys.matrix.add(row, col, side * c);
      sys.matrix.add(row, col + 1, side * cs);
      sys.matrix.add(row + 1, col, c);
      sys.matrix.add(row + 1, col + 1, cs);
    }
    sys.rhs[row] -= side * constant;
    sys.rhs[row + 1] -= constant;
  };

  for (std::size_t e = 0; e < n; ++e) {
    for (std::size_t side = 0; side < 2; ++side) {
      const FaceFlux& face = faces[e + side];
      const double sign = side == 0 ? -1.0 : 1.0;
      add_flux(p_dof(e, 0), e + side, sign, face.p, face.p0);
      add_flux(u_dof(e, 0), e + side, sign, face.u, face.u0);
    }
    sys.matrix.add(p_dof(e, 1), p_dof(e, 0), -2.0);
    sys.matrix.add(u_dof(e, 1), u_dof(e, 0), -2.0);
    for (std::size_t q = 0; q < 2; ++q) {
      const double xi = Quadrature::nodes[q];
      const double w = 0.5 * dx * Quadrature::weights[q];
      const std::array<double, 2> basis{1.0, xi};
      for (std::size_t k = 0; k < 2; ++k) {
        const double wk = w * basis[k];
        for (std::size_t j = 0; j < 2; ++j) {
          const double wkj = wk * basis[j];
          sys.matrix.add(p_dof(e, k), p_dof(e, j), wkj * coeffs.g1[e][q]);
          sys.matrix.add(p_dof(e, k), u_dof(e, j), wkj * coeffs.h1[e][q]);
          sys.matrix.add(u_dof(e, k), p_dof(e, j), wkj * coeffs.h2[e][q]);
          sys.matrix.add(u_dof(e, k), u_dof(e, j), wkj * coeffs.g2[e][q]);
        }
        sys.rhs[p_dof(e, k)] += wk * coeffs.f1[e][q];
        sys.rhs[u_dof(e, k)] += wk * coeffs.f2[e][q];
      }
    }
  }
  return sys;
}

namespace {

using Block = std::array<std::array<double, 2>, 2>;
using Pair = std::array<double, 2>;

Block block(const BandedMatrix& a, std::size_t row, std::size_t col) {
  return {{{a(row, col), a(row, col + 1)}, {a(row + 1, col), a(row + 1, col + 1)}}};
}

Block mul(const Block& a, const Block& b) {
  Block c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Pair mul(const Block& a, const Pair& v) {
  return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

// Static condensation: u_e = B^-1 (b_p - L p_{e-1} - D p_e) from the p rows
// of e, substituted into the u rows leaves a block tridiagonal system in p.
// Returns an empty vector when some B is singular.
std::vector<double> solve_condensed(const EllipticSystem& sys) {
  const BandedMatrix& a = sys.matrix;
  const std::size_t n = sys.elements;
  std::vector<Block> x_blk(n), y_blk(n);
  std::vector<Pair> c(n);
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t rp = p_dof(e, 0);
    const Block b = block(a, rp, u_dof(e, 0));
    const double det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    if (!(std::abs(det) > 0.0)) return {};
    const Block inv{{{b[1][1] / det, -b[0][1] / det}, {-b[1][0] / det, b[0][0] / det}}};
    x_blk[e] = e > 0 ? mul(inv, block(a, rp, p_dof(e - 1, 0))) : Block{};
    y_blk[e] = mul(inv, block(a, rp, p_dof(e, 0)));
    c[e] = mul(inv, Pair{sys.rhs[rp], sys.rhs[rp + 1]});
  }

  BandedMatrix schur(2 * n, 3, 3);
  std::vector<double> rhs(2 * n);
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t ru = u_dof(e, 0);
    const Block a_ue = block(a, ru, u_dof(e, 0));
    Block diag = block(a, ru, p_dof(e, 0));
    const Block own = mul(a_ue, y_blk[e]);
    Pair r{sys.rhs[ru], sys.rhs[ru + 1]};
    const Pair rc = mul(a_ue, c[e]);
    for (int i = 0; i < 2; ++i) {
      r[i] -= rc[i];
      for (int j = 0; j < 2; ++j) diag[i][j] -= own[i][j];
    }
    if (e > 0) {
      Block lower = block(a, ru, p_dof(e - 1, 0));
      const Block sub = mul(a_ue, x_blk[e]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) schur.add(2 * e + i, 2 * (e - 1) + j, lower[i][j] - sub[i][j]);
    }
    if (e + 1 < n) {
      const Block a_un = block(a, ru, u_dof(e + 1, 0));
      Block upper = block(a, ru, p_dof(e + 1, 0));
      const Block up = mul(a_un, y_blk[e + 1]);
      const Block dn = mul(a_un, x_blk[e + 1]);
      const Pair rn = mul(a_un, c[e + 1]);
      for (int i = 0; i < 2; ++i) {
        r[i] -= rn[i];
        for (int j = 0; j < 2; ++j) {
          diag[i][j] -= dn[i][j];
          schur.add(2 * e + i, 2 * (e + 1) + j, upper[i][j] - up[i][j]);
        }
      }
    }
    for (int i = 0; i < 2; ++i) {
      rhs[2 * e + i] = r[i];
      for (int j = 0; j < 2; ++j) schur.add(2 * e + i, 2 * e + j, diag[i][j]);
    }
  }

  BandedSolve ps;
  try {
    ps = solve_banded(schur, rhs);
  } catch (const SingularSystem& err) {
    throw SingularSystem(err.what(), p_dof(err.row() / 2, 0));
  }
  std::vector<double> x(kDofs * n);
  for (std::size_t e = 0; e < n; ++e) {
    const Pair p{ps.x[2 * e], ps.x[2 * e + 1]};
    const Pair prev = e > 0 ? Pair{ps.x[2 * e - 2], ps.x[2 * e - 1]} : Pair{};
    const Pair xp = mul(x_blk[e], prev);
    const Pair yp = mul(y_blk[e], p);
    x[p_dof(e, 0)] = p[0];
    x[p_dof(e, 1)] = p[1];
    x[u_dof(e, 0)] = c[e][0] - xp[0] - yp[0];
    x[u_dof(e, 1)] = c[e][1] - xp[1] - yp[1];
  }
  return x;
}

double relative_residual(const BandedMatrix& a, const std::vector<double>& x,
                         const std::vector<double>& b) {
  const std::vector<double> ax = a.multiply(x);
  double r = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    r = std::max(r, std::abs(ax[i] - b[i]));
    bn = std::max(bn, std::abs(b[i]));
  }
  return bn > 0.0 ? r / bn : r;
}

}  // namespace

EllipticSolution solve(const EllipticSystem& system) {
  std::vector<double> x;
  double residual = 0.0;
  try {
    if (system.condensable) x = solve_condensed(system);
    if (!x.empty()) {
      residual = relative_residual(system.matrix, x, system.rhs);
    } else {
      BandedSolve raw = solve_banded(system.matrix, system.rhs);
      x = std::move(raw.x);
      residual = raw.relative_residual;
    }
  } catch (const SingularSystem& err) {
    const std::size_t element = err.row() / kDofs;
    throw SingularSystem("elliptic solve failed at element " + std::to_string(element) + ": " +
                             err.what(),
                         err.row());
  }
  EllipticSolution out{Field(system.elements), Field(system.elements), residual};
  for (std::size_t e = 0; e < system.elements; ++e) {
    out.p[e] = {x[p_dof(e, 0)], x[p_dof(e, 1)]};
    out.hu[e] = {x[u_dof(e, 0)], x[u_dof(e, 1)]};
  }
  return out;
}

LiftedDerivatives lifted_derivatives(const Field& p, const Field& u,
                                     const std::vector<double>& face_scale, double dx,
                                     EllipticBoundary left, EllipticBoundary right,
                                     const FluxPenalty& penalty) {
  const std::size_t n = p.size();
  const std::vector<FaceFlux> faces = face_fluxes(n, face_scale, left, right, penalty);
  std::vector<double> ph(n + 1), uh(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    ph[f] = flux_value(faces[f].p, faces[f].p0, f, p, u);
    uh[f] = flux_value(faces[f].u, faces[f].u0, f, p, u);
  }
  LiftedDerivatives out{Field(n), Field(n)};
  for (std::size_t e = 0; e < n; ++e) {
    // Mass matrix diag(dx, dx/3).
    out.dp[e] = {(ph[e + 1] - ph[e]) / dx, 3.0 * (ph[e + 1] + ph[e] - 2.0 * p[e].mean) / dx};
    out.du[e] = {(uh[e + 1] - uh[e]) / dx, 3.0 * (uh[e + 1] + uh[e] - 2.0 * u[e].mean) / dx};
  }
  return out;
}

}  // namespace nhswe
