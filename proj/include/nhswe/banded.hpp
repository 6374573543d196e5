/// @file banded.hpp
/// @brief General banded matrix and a direct LU solve (LAPACK dgbsv).

#ifndef NHSWE_BANDED_HPP
#define NHSWE_BANDED_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhswe {

class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, std::size_t row)
      : std::runtime_error(what), row_(row) {}
  /// Zero-based row/column of the failed pivot.
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Square n x n matrix with kl sub- and ku super-diagonals, stored column by
/// column in the LAPACK band layout (leading dimension kl + ku + 1).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + kl_ >= i && i + ku_ >= j && i < n_ && j < n_;
  }
  double operator()(std::size_t i, std::size_t j) const {
    return in_band(i, j) ? ab_[index(i, j)] : 0.0;
  }
  /// Accumulates; throws std::out_of_range outside the band.
  void add(std::size_t i, std::size_t j, double value) {
    if (!in_band(i, j)) throw_outside(i, j);
    ab_[index(i, j)] += value;
  }

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<std::vector<double>> to_dense() const;

  /// Raw column-major band storage.
  const std::vector<double>& storage() const { return ab_; }
  std::size_t leading_dimension() const { return ldab_; }

 private:
  [[noreturn]] static void throw_outside(std::size_t i, std::size_t j);
  std::size_t index(std::size_t i, std::size_t j) const { return ku_ + i - j + j * ldab_; }

  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::size_t ldab_;
  std::vector<double> ab_;
};

struct BandedSolve {
  std::vector<double> x;
  double relative_residual = 0.0;  ///< ||A x - b||_inf / ||b||_inf (0 when b = 0)
};

/// Equilibrated partial-pivoting LU solve: LAPACK dgbsv, or an unblocked
/// kernel when kl + ku <= 8. Throws SingularSystem on a zero pivot.
BandedSolve solve_banded(const BandedMatrix& a, std::span<const double> rhs);

}  // namespace nhswe

#endif  // NHSWE_BANDED_HPP
