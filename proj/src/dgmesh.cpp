#include "nhswe/dgmesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhswe {

Mesh1D::Mesh1D(double x_left, double x_right, std::size_t elements)
    : x_left_(x_left), x_right_(x_right), n_(elements) {
  if (elements < 2) throw std::invalid_argument("Mesh1D: need at least two elements");
  if (!(x_right > x_left)) throw std::invalid_argument("Mesh1D: empty domain");
  dx_ = (x_right - x_left) / static_cast<double>(elements);
}

std::size_t Mesh1D::locate(double x) const {
  if (!(x >= x_left_ && x <= x_right_)) {
    throw std::out_of_range("Mesh1D::locate: x=" + std::to_string(x) + " outside [" +
                            std::to_string(x_left_) + ", " + std::to_string(x_right_) + "]");
  }
  const auto i = static_cast<std::size_t>(std::floor((x - x_left_) / dx_));
  return std::min(i, n_ - 1);
}

Modal from_nodes(double left_node, double right_node) {
  return {0.5 * (left_node + right_node), 0.5 * (right_node - left_node) / Quadrature::node};
}

Modal from_vertices(double left_value, double right_value) {
  return {0.5 * (left_value + right_value), 0.5 * (right_value - left_value)};
}

Field project(const std::function<double(double)>& f, const Mesh1D& mesh) {
  Field out(mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    out[i] = from_nodes(f(mesh.quad_point(i, 0)), f(mesh.quad_point(i, 1)));
  }
  return out;
}

Field interpolate_vertices(const std::function<double(double)>& f, const Mesh1D& mesh) {
  Field out(mesh.size());
  double left = f(mesh.vertex(0));
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double right = f(mesh.vertex(i + 1));
    out[i] = from_vertices(left, right);
    left = right;
  }
  return out;
}

double eval_field(const Field& field, const Mesh1D& mesh, double x) {
  const std::size_t i = mesh.locate(x);
  return field[i].at(mesh.to_reference(i, x));
}

TracePair traces(const Field& field, std::size_t vertex) {
  if (vertex == 0 || vertex >= field.size()) {
    throw std::out_of_range("traces: vertex " + std::to_string(vertex) + " is not interior");
  }
  return {field[vertex - 1].right(), field[vertex].left()};
}

double integral(const Field& field, const Mesh1D& mesh) {
  double sum = 0.0;
  for (const Modal& m : field) sum += m.mean;
  return sum * mesh.dx();
}

double l2_difference(const Field& a, const Field& b, const Mesh1D& mesh) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double dm = a[i].mean - b[i].mean;
    const double ds = a[i].slope - b[i].slope;
    sum += dm * dm + ds * ds / 3.0;
  }
  return std::sqrt(sum * mesh.dx());
}

double l2_difference_refined(const Field& coarse, const Mesh1D& coarse_mesh, const Field& fine,
                             const Mesh1D& fine_mesh) {
  double sum = 0.0;
  for (std::size_t j = 0; j < fine_mesh.size(); ++j) {
    for (std::size_t q = 0; q < 2; ++q) {
      const double x = fine_mesh.quad_point(j, q);
      const double diff = fine[j].at(Quadrature::nodes[q]) - eval_field(coarse, coarse_mesh, x);
      sum += 0.5 * fine_mesh.dx() * Quadrature::weights[q] * diff * diff;
    }
  }
  return std::sqrt(sum);
}

double max_abs_nodal(const Field& field) {
  double m = 0.0;
  for (const Modal& c : field) m = std::max({m, std::abs(c.left()), std::abs(c.right())});
  return m;
}

}  // namespace nhswe
