/// @file dgmesh.hpp
/// @brief Uniform 1D mesh and the piecewise-linear modal DG space.
///
/// On element i the local coordinate is xi in [-1, 1] with
/// x = center(i) + xi * dx / 2, and a scalar unknown is mean + slope * xi.
/// Integrals use the two-point Gauss rule, exact for cubics.

#ifndef NHSWE_DGMESH_HPP
#define NHSWE_DGMESH_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nhswe {

struct Quadrature {
  static constexpr double node = 0.57735026918962576451;  // 1/sqrt(3)
  static constexpr std::array<double, 2> nodes{-node, node};
  static constexpr std::array<double, 2> weights{1.0, 1.0};
};

class Mesh1D {
 public:
  Mesh1D(double x_left, double x_right, std::size_t elements);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }

  double vertex(std::size_t k) const { return x_left_ + static_cast<double>(k) * dx_; }
  double center(std::size_t i) const { return x_left_ + (static_cast<double>(i) + 0.5) * dx_; }
  double to_physical(std::size_t i, double xi) const { return center(i) + 0.5 * dx_ * xi; }
  double quad_point(std::size_t i, std::size_t q) const {
    return to_physical(i, Quadrature::nodes[q]);
  }

  /// Element containing x; a point on an interior vertex belongs to the
  /// element on its right. Throws std::out_of_range outside the domain.
  std::size_t locate(double x) const;
  double to_reference(std::size_t i, double x) const { return 2.0 * (x - center(i)) / dx_; }

 private:
  double x_left_;
  double x_right_;
  std::size_t n_;
  double dx_;
};

/// Mean and Legendre-P1 coefficient of one element.
struct Modal {
  double mean = 0.0;
  double slope = 0.0;

  double at(double xi) const { return mean + slope * xi; }
  double left() const { return mean - slope; }
  double right() const { return mean + slope; }
  /// d/dx on an element of width dx.
  double gradient(double dx) const { return 2.0 * slope / dx; }

  friend bool operator==(const Modal&, const Modal&) = default;
};

/// One scalar DG unknown: a Modal per element.
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t elements) : data_(elements) {}

  std::size_t size() const { return data_.size(); }
  Modal& operator[](std::size_t i) { return data_[i]; }
  const Modal& operator[](std::size_t i) const { return data_[i]; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  /// Values at the two quadrature nodes of element i.
  std::array<double, 2> at_nodes(std::size_t i) const {
    return {data_[i].at(Quadrature::nodes[0]), data_[i].at(Quadrature::nodes[1])};
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::vector<Modal> data_;
};

/// Modal coefficients from values at the two quadrature nodes; this is the
/// discrete L2 projection under the two-point rule.
Modal from_nodes(double left_node, double right_node);

/// Modal coefficients of the linear function through two vertex values.
Modal from_vertices(double left_value, double right_value);

/// Per-element L2 projection of f (two-point quadrature).
Field project(const std::function<double(double)>& f, const Mesh1D& mesh);

/// Continuous piecewise-linear interpolant of f at the mesh vertices.
Field interpolate_vertices(const std::function<double(double)>& f, const Mesh1D& mesh);

double eval_field(const Field& field, const Mesh1D& mesh, double x);

/// One-sided limits at vertex k (1 <= k < N): from element k-1 and element k.
struct TracePair {
  double left;
  double right;
};
TracePair traces(const Field& field, std::size_t vertex);

/// Integral of the field over the domain.
double integral(const Field& field, const Mesh1D& mesh);

/// L2 norm of a - b on the same mesh.
double l2_difference(const Field& a, const Field& b, const Mesh1D& mesh);

/// L2 norm of a (coarse mesh) minus b (mesh refined by an integer factor).
double l2_difference_refined(const Field& coarse, const Mesh1D& coarse_mesh, const Field& fine,
                             const Mesh1D& fine_mesh);

double max_abs_nodal(const Field& field);

}  // namespace nhswe

#endif  // NHSWE_DGMESH_HPP
