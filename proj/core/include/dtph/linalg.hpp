#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace dtph {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Threshold factors shared by every classification and solve in the library.
///
/// The stored numbers are base factors. The effective thresholds are
///   rank:     rank_rtol * max(rows, cols) * sigma_max
///   psd:      psd_atol * (1 + spectral radius of the tested form)
///   residual: residual_rtol * (problem scale)
struct Tolerances {
  double rank_rtol = 1e-10;
  double psd_atol = 1e-10;
  double residual_rtol = 1e-9;

  void validate() const;
};

/// True when every imaginary part is exactly zero.
bool is_real(const Matrix& m);

/// Throws DimensionMismatch or InvalidArgument (non-finite entries).
void require_finite(const Matrix& m, const char* what);

Matrix hermitian_part(const Matrix& h);

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double slack = 0.0;  // effective psd threshold that was applied
  Vector min_eigenvector;
};

/// PSD test of the Hermitian part (H + H^H)/2.
PsdReport is_psd(const Matrix& h, const Tolerances& tol = {});

struct RankBases {
  Eigen::Index rank = 0;
  Matrix image_basis;   // orthonormal columns spanning range(A)
  Matrix kernel_basis;  // orthonormal columns spanning ker(A)
  Eigen::VectorXd singular_values;
};

RankBases rank_and_bases(const Matrix& a, const Tolerances& tol = {});

/// Orthonormal basis of the left null space, i.e. columns Z with Z^H A = 0.
Matrix left_kernel_basis(const Matrix& a, const Tolerances& tol = {});

/// Hermitian square root of an HPD matrix; NotPositiveDefinite otherwise.
Matrix hpd_sqrt(const Matrix& x, const Tolerances& tol = {});

/// Hermitian square root of a PSD matrix with negative roundoff clipped to 0.
Matrix psd_sqrt(const Matrix& x);

double op_norm2(const Matrix& a);
double min_singular_value(const Matrix& a);

struct SolveResult {
  Matrix x;
  bool unique = true;
  double residual = 0.0;
  double bound = 0.0;
};

/// Unique solution of A x = b. Throws NonUnique when ker(A) is nontrivial and
/// Inconsistent when the least-squares residual exceeds
/// residual_rtol * (||A|| ||x|| + ||b||).
SolveResult solve_square(const Matrix& a, const Matrix& b, const Tolerances& tol = {});

Matrix block_diag(const Matrix& a, const Matrix& b);

}  // namespace dtph
