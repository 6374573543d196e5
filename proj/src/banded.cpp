#include "nhswe/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

// Present when LAPACK is OpenBLAS. Its worker threads only add locking
// overhead for band systems of this size.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace nhswe {

namespace {

void single_threaded_blas() {
  static const bool done = [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
    return true;
  }();
  (void)done;
}

// Unblocked partial-pivoting band LU and solve in LAPACK band storage, for
// narrow bands where per-column BLAS calls dominate dgbsv. Returns the
// first zero-pivot column, or n.
std::size_t narrow_band_solve(std::vector<double>& ab, std::size_t n, std::size_t kl,
                              std::size_t ku, std::size_t ldab, std::vector<double>& b) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return ab[kl + ku + i - j + j * ldab]; };
  std::size_t ju = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    std::size_t piv = 0;
    for (std::size_t i = 1; i <= km; ++i) {
      if (std::abs(at(j + i, j)) > std::abs(at(j + piv, j))) piv = i;
    }
    if (at(j + piv, j) == 0.0) return j;
    ju = std::max(ju, std::min(j + ku + piv, n - 1));
    if (piv != 0) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + piv, c));
      std::swap(b[j], b[j + piv]);
    }
    const double inv = 1.0 / at(j, j);
    for (std::size_t i = 1; i <= km; ++i) {
      at(j + i, j) *= inv;
      b[j + i] -= at(j + i, j) * b[j];
    }
    for (std::size_t c = j + 1; c <= ju; ++c) {
      const double f = at(j, c);
      if (f == 0.0) continue;
      for (std::size_t i = 1; i <= km; ++i) at(j + i, c) -= at(j + i, j) * f;
    }
  }
  for (std::size_t j = n; j-- > 0;) {
    b[j] /= at(j, j);
    const std::size_t i0 = j > kl + ku ? j - kl - ku : 0;
    for (std::size_t i = i0; i < j; ++i) b[i] -= at(i, j) * b[j];
  }
  return n;
}

constexpr std::size_t kNarrowBand = 8;

}  // namespace

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(kl + ku + 1), ab_(ldab_ * n, 0.0) {}

void BandedMatrix::throw_outside(std::size_t i, std::size_t j) {
  throw std::out_of_range("BandedMatrix::add: (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside band");
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t i0 = j > ku_ ? j - ku_ : 0;
    const std::size_t i1 = std::min(n_ - 1, j + kl_);
    for (std::size_t i = i0; i <= i1; ++i) y[i] += ab_[index(i, j)] * x[j];
  }
  return y;
}

std::vector<std::vector<double>> BandedMatrix::to_dense() const {
  std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) d[i][j] = (*this)(i, j);
  return d;
}

BandedSolve solve_banded(const BandedMatrix& a, std::span<const double> rhs) {
  single_threaded_blas();
  const std::size_t n = a.size();
  const std::size_t kl = a.lower();
  const std::size_t ku = a.upper();

  // Row then column equilibration: the two equation families of the
  // pressure system differ by many orders of magnitude.
  // Factorisation workspace with kl extra rows per column for fill-in.
  const std::size_t ldab = 2 * kl + ku + 1;
  std::vector<double> ab(ldab * n, 0.0);
  const std::vector<double>& src = a.storage();
  for (std::size_t j = 0; j < n; ++j) {
    std::copy_n(src.begin() + j * a.leading_dimension(), a.leading_dimension(),
                ab.begin() + j * ldab + kl);
  }
  auto column_rows = [&](std::size_t j) {
    return std::pair{j > ku ? j - ku : std::size_t{0}, std::min(n - 1, j + kl)};
  };
  auto at = [&](std::size_t i, std::size_t j) -> double& { return ab[kl + ku + i - j + j * ldab]; };

  std::vector<double> row_scale(n, 0.0), col_scale(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto [i0, i1] = column_rows(j);
    for (std::size_t i = i0; i <= i1; ++i) row_scale[i] = std::max(row_scale[i], std::abs(at(i, j)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row_scale[i] == 0.0) throw SingularSystem("solve_banded: zero row", i);
    row_scale[i] = 1.0 / row_scale[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto [i0, i1] = column_rows(j);
    for (std::size_t i = i0; i <= i1; ++i) {
      col_scale[j] = std::max(col_scale[j], std::abs(at(i, j)) * row_scale[i]);
    }
    if (col_scale[j] == 0.0) throw SingularSystem("solve_banded: zero column", j);
    col_scale[j] = 1.0 / col_scale[j];
    for (std::size_t i = i0; i <= i1; ++i) at(i, j) *= row_scale[i] * col_scale[j];
  }
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rhs[i] * row_scale[i];

  if (kl + ku <= kNarrowBand) {
    const std::size_t row = narrow_band_solve(ab, n, kl, ku, ldab, b);
    if (row < n) {
      throw SingularSystem("solve_banded: zero pivot at row " + std::to_string(row), row);
    }
  } else {
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_dgbsv_work(
        LAPACK_COL_MAJOR, static_cast<lapack_int>(n), static_cast<lapack_int>(kl),
        static_cast<lapack_int>(ku), 1, ab.data(), static_cast<lapack_int>(ldab), ipiv.data(),
        b.data(), static_cast<lapack_int>(n));
    if (info > 0) {
      const auto row = static_cast<std::size_t>(info - 1);
      throw SingularSystem("solve_banded: zero pivot at row " + std::to_string(row), row);
    }
    if (info < 0) throw std::invalid_argument("solve_banded: invalid argument to dgbsv");
  }

  BandedSolve out;
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = b[j] * col_scale[j];

  const std::vector<double> ax = a.multiply(out.x);
  double r = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r = std::max(r, std::abs(ax[i] - rhs[i]));
    bn = std::max(bn, std::abs(rhs[i]));
  }
  out.relative_residual = bn > 0.0 ? r / bn : r;
  return out;
}

}  // namespace nhswe
