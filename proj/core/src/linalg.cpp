#include "dtph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtph/error.hpp"

namespace dtph {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NonUnique: return "NonUnique";
    case ErrorKind::NotAGraph: return "NotAGraph";
    case ErrorKind::ZeroParameter: return "ZeroParameter";
    case ErrorKind::SingularPencil: return "SingularPencil";
    case ErrorKind::IndexTooHigh: return "IndexTooHigh";
    case ErrorKind::InconsistentInitialState: return "InconsistentInitialState";
    case ErrorKind::NonUniqueStep: return "NonUniqueStep";
    case ErrorKind::InconsistentStep: return "InconsistentStep";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::NotScatteringPH: return "NotScatteringPH";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::NotLagrangian: return "NotLagrangian";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::PortMismatch: return "PortMismatch";
    case ErrorKind::NonContractiveCoupling: return "NonContractiveCoupling";
    case ErrorKind::CouplingSingular: return "CouplingSingular";
    case ErrorKind::NotIdentityE: return "NotIdentityE";
    case ErrorKind::FeedbackSingular: return "FeedbackSingular";
    case ErrorKind::NonCausal: return "NonCausal";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerances::validate() const {
  if (!(rank_rtol > 0.0) || !(psd_atol > 0.0) || !(residual_rtol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  }
}

bool is_real(const Matrix& m) {
  return m.size() == 0 || (m.imag().array() == 0.0).all();
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " contains NaN or Inf");
  }
}

Matrix hermitian_part(const Matrix& h) {
  if (h.rows() != h.cols()) {
    std::ostringstream os;
    os << "expected a square matrix, got " << h.rows() << "x" << h.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  return (h + h.adjoint()) / 2.0;
}

namespace {

struct Eig {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;
};

Eig hermitian_eig(const Matrix& hs) {
  Eig out;
  if (hs.rows() == 0) {
    out.values.resize(0);
    out.vectors.resize(0, 0);
    return out;
  }
  if (is_real(hs)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hs.real());
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hs);
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

struct FullSvd {
  Eigen::VectorXd sigma;
  Matrix u;
  Matrix v;
};

FullSvd full_svd(const Matrix& a) {
  FullSvd out;
  if (a.size() == 0) {
    out.sigma.resize(0);
    out.u = Matrix::Identity(a.rows(), a.rows());
    out.v = Matrix::Identity(a.cols(), a.cols());
    return out;
  }
  if (is_real(a)) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.sigma = svd.singularValues();
    out.u = svd.matrixU().cast<Complex>();
    out.v = svd.matrixV().cast<Complex>();
  } else {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.sigma = svd.singularValues();
    out.u = svd.matrixU();
    out.v = svd.matrixV();
  }
  return out;
}

Eigen::Index numerical_rank(const Eigen::VectorXd& sigma, Eigen::Index rows, Eigen::Index cols,
                            const Tolerances& tol) {
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double cutoff =
      tol.rank_rtol * static_cast<double>(std::max(rows, cols)) * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

}  // namespace

PsdReport is_psd(const Matrix& h, const Tolerances& tol) {
  const Matrix hs = hermitian_part(h);
  PsdReport report;
  if (hs.rows() == 0) {
    report.psd = true;
    report.slack = tol.psd_atol;
    return report;
  }
  const Eig eig = hermitian_eig(hs);
  report.min_eigenvalue = eig.values(0);
  report.max_eigenvalue = eig.values(eig.values.size() - 1);
  const double radius = std::max(std::abs(report.min_eigenvalue), std::abs(report.max_eigenvalue));
  report.slack = tol.psd_atol * (1.0 + radius);
  report.psd = report.min_eigenvalue >= -report.slack;
  report.min_eigenvector = eig.vectors.col(0);
  return report;
}

RankBases rank_and_bases(const Matrix& a, const Tolerances& tol) {
  const FullSvd svd = full_svd(a);
  RankBases out;
  out.singular_values = svd.sigma;
  out.rank = numerical_rank(svd.sigma, a.rows(), a.cols(), tol);
  out.image_basis = svd.u.leftCols(out.rank);
  out.kernel_basis = svd.v.rightCols(a.cols() - out.rank);
  return out;
}

Matrix left_kernel_basis(const Matrix& a, const Tolerances& tol) {
  const FullSvd svd = full_svd(a);
  const Eigen::Index r = numerical_rank(svd.sigma, a.rows(), a.cols(), tol);
  return svd.u.rightCols(a.rows() - r);
}

Matrix hpd_sqrt(const Matrix& x, const Tolerances& tol) {
  const Matrix xs = hermitian_part(x);
  if (xs.rows() == 0) return xs;
  const Eig eig = hermitian_eig(xs);
  const double radius = std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
  if (eig.values(0) <= tol.psd_atol * (1.0 + radius)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << eig.values(0) << " is not positive";
    throw Error(ErrorKind::NotPositiveDefinite, os.str());
  }
  const Eigen::VectorXd root = eig.values.cwiseSqrt();
  Matrix s = eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return (s + s.adjoint()) / 2.0;
}

Matrix psd_sqrt(const Matrix& x) {
  const Matrix xs = hermitian_part(x);
  if (xs.rows() == 0) return xs;
  const Eig eig = hermitian_eig(xs);
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  Matrix s = eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return (s + s.adjoint()) / 2.0;
}

double op_norm2(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (is_real(a)) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a.real()).singularValues()(0);
  }
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

double min_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::VectorXd s = is_real(a) ? Eigen::JacobiSVD<Eigen::MatrixXd>(a.real()).singularValues()
                                 : Eigen::JacobiSVD<Matrix>(a).singularValues();
  return s(s.size() - 1);
}

SolveResult solve_square(const Matrix& a, const Matrix& b, const Tolerances& tol) {
  if (a.rows() != b.rows()) {
    std::ostringstream os;
    os << "solve: A has " << a.rows() << " rows but b has " << b.rows();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  const FullSvd svd = full_svd(a);
  const Eigen::Index r = numerical_rank(svd.sigma, a.rows(), a.cols(), tol);
  if (r < a.cols()) {
    std::ostringstream os;
    os << "solve: kernel of the " << a.rows() << "x" << a.cols() << " matrix has dimension "
       << (a.cols() - r);
    throw Error(ErrorKind::NonUnique, os.str());
  }
  SolveResult out;
  // x = V diag(1/sigma) U^H b, restricted to the numerical range.
  Matrix ub = svd.u.leftCols(r).adjoint() * b;
  for (Eigen::Index i = 0; i < r; ++i) ub.row(i) /= svd.sigma(i);
  out.x = svd.v.leftCols(r) * ub;
  out.residual = (a * out.x - b).norm();
  const double a_norm = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
  out.bound = tol.residual_rtol * (a_norm * out.x.norm() + b.norm());
  if (out.residual > out.bound) {
    std::ostringstream os;
    os << "solve: residual " << out.residual << " exceeds bound " << out.bound;
    throw Error(ErrorKind::Inconsistent, os.str());
  }
  out.unique = true;
  return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace dtph
