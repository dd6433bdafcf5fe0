#include "dtph/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtph/error.hpp"

namespace dtph {

namespace {

void require_nonzero(Complex a, const char* name) {
  if (a == Complex(0.0, 0.0)) {
    throw Error(ErrorKind::ZeroParameter, std::string("Cayley parameter ") + name + " is zero");
  }
}

struct FormCheck {
  bool upper_ok = false;  // form <= slack
  bool lower_ok = false;  // form >= -slack
  double min_eig = 0.0;
  double max_abs = 0.0;
  Vector min_vec;
  Vector max_vec;
};

// Two-sided PSD test of a Hermitian form.
FormCheck check_form(const Matrix& form, const Tolerances& tol) {
  FormCheck out;
  const PsdReport lower = is_psd(form, tol);
  const PsdReport upper = is_psd(-form, tol);
  out.lower_ok = lower.psd;
  out.upper_ok = upper.psd;
  out.min_eig = lower.min_eigenvalue;
  out.max_abs = std::max(std::abs(lower.min_eigenvalue), std::abs(upper.min_eigenvalue));
  out.min_vec = lower.min_eigenvector;
  out.max_vec = upper.min_eigenvector;
  return out;
}

}  // namespace

Subspace Subspace::from_image(const Matrix& p, const Matrix& q, const Tolerances& tol) {
  if (p.cols() != q.cols()) {
    std::ostringstream os;
    os << "P has " << p.cols() << " columns but Q has " << q.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  require_finite(p, "P");
  require_finite(q, "Q");
  Matrix stacked(p.rows() + q.rows(), p.cols());
  stacked << p, q;
  const RankBases rb = rank_and_bases(stacked, tol);
  return Subspace(rb.image_basis.topRows(p.rows()), rb.image_basis.bottomRows(q.rows()));
}

Subspace Subspace::from_kernel(const Matrix& k1, const Matrix& k2, const Tolerances& tol) {
  if (k1.rows() != k2.rows()) {
    std::ostringstream os;
    os << "K1 has " << k1.rows() << " rows but K2 has " << k2.rows();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  require_finite(k1, "K1");
  require_finite(k2, "K2");
  Matrix k(k1.rows(), k1.cols() + k2.cols());
  k << k1, k2;
  const RankBases rb = rank_and_bases(k, tol);
  // The kernel basis from the SVD is already orthonormal.
  return Subspace(rb.kernel_basis.topRows(k1.cols()), rb.kernel_basis.bottomRows(k2.cols()));
}

Subspace Subspace::graph(const Matrix& t, const Tolerances& tol) {
  return from_image(Matrix::Identity(t.cols(), t.cols()), t, tol);
}

Matrix Subspace::stacked() const {
  Matrix s(p() + q(), dim());
  s << first_, second_;
  return s;
}

bool Subspace::is_real() const { return dtph::is_real(first_) && dtph::is_real(second_); }

KernelRep to_kernel(const Subspace& m, const Tolerances& tol) {
  const Matrix z = left_kernel_basis(m.stacked(), tol);
  const Matrix k = z.adjoint();
  return {k.leftCols(m.p()), k.rightCols(m.q())};
}

bool contains(const Subspace& m, const Vector& v, const Vector& w, const Tolerances& tol) {
  if (v.size() != m.p() || w.size() != m.q()) {
    std::ostringstream os;
    os << "contains: expected vectors of size (" << m.p() << ", " << m.q() << "), got ("
       << v.size() << ", " << w.size() << ")";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  Vector x(v.size() + w.size());
  x << v, w;
  const Matrix b = m.stacked();
  const Vector r = x - b * (b.adjoint() * x);
  return r.norm() <= tol.residual_rtol * x.norm();
}

bool same_set(const Subspace& a, const Subspace& b, const Tolerances& tol) {
  if (a.p() != b.p() || a.q() != b.q() || a.dim() != b.dim()) return false;
  for (Eigen::Index j = 0; j < a.dim(); ++j) {
    if (!contains(b, a.first().col(j), a.second().col(j), tol)) return false;
  }
  for (Eigen::Index j = 0; j < b.dim(); ++j) {
    if (!contains(a, b.first().col(j), b.second().col(j), tol)) return false;
  }
  return true;
}

Subspace flip(const Subspace& m, const Tolerances& tol) {
  return Subspace::from_image(m.second(), m.first(), tol);
}

ClassificationReport classify(const Subspace& m, const Tolerances& tol) {
  if (m.p() != m.q()) {
    std::ostringstream os;
    os << "classify needs a relation in K^n x K^n, got K^" << m.p() << " x K^" << m.q();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  const Matrix& p = m.first();
  const Matrix& q = m.second();
  const Matrix pp = p.adjoint() * p;
  const Matrix qq = q.adjoint() * q;
  const Matrix qp = q.adjoint() * p;

  ClassificationReport r;
  r.dim = m.dim();
  r.n = m.p();

  // ||Q z|| <= ||P z||  <=>  P^H P - Q^H Q >= 0
  const FormCheck norm_form = check_form(pp - qq, tol);
  r.contractive = norm_form.lower_ok;
  r.norm_preserving = norm_form.lower_ok && norm_form.upper_ok;
  r.contractive_min_eig = norm_form.min_eig;
  r.norm_defect = norm_form.max_abs;
  if (!norm_form.lower_ok) {
    r.contractive_witness = norm_form.min_vec;
    r.norm_preserving_witness = norm_form.min_vec;
  } else if (!norm_form.upper_ok) {
    r.norm_preserving_witness = norm_form.max_vec;
  }

  // Re<v, w> >= 0  <=>  Q^H P + P^H Q >= 0
  const FormCheck mono_form = check_form(qp + qp.adjoint(), tol);
  r.monotone = mono_form.lower_ok;
  r.dirac = mono_form.lower_ok && mono_form.upper_ok;
  r.monotone_min_eig = mono_form.min_eig;
  r.dirac_defect = mono_form.max_abs;
  if (!mono_form.lower_ok) {
    r.monotone_witness = mono_form.min_vec;
    r.dirac_witness = mono_form.min_vec;
  } else if (!mono_form.upper_ok) {
    r.dirac_witness = mono_form.max_vec;
  }

  // Q^H P = P^H Q, tested on the Hermitian matrix i (Q^H P - P^H Q).
  const Matrix skew = Complex(0.0, 1.0) * (qp - qp.adjoint());
  const FormCheck lag_form = check_form(skew, tol);
  r.lagrangian = lag_form.lower_ok && lag_form.upper_ok;
  r.lagrangian_defect = lag_form.max_abs;
  if (!lag_form.lower_ok) {
    r.lagrangian_witness = lag_form.min_vec;
  } else if (!lag_form.upper_ok) {
    r.lagrangian_witness = lag_form.max_vec;
  }

  const bool full = r.dim == r.n;
  r.maximal_contractive = r.contractive && full;
  r.maximal_monotone = r.monotone && full;
  r.maximal_norm_preserving = r.norm_preserving && full;
  return r;
}

Subspace cayley(const Subspace& m, Complex alpha, Complex beta, const Tolerances& tol) {
  require_nonzero(alpha, "alpha");
  require_nonzero(beta, "beta");
  if (m.p() != m.q()) {
    throw Error(ErrorKind::DimensionMismatch, "Cayley transform needs p == q");
  }
  return Subspace::from_image(beta * m.first() + alpha * m.second(),
                              beta * m.first() - alpha * m.second(), tol);
}

Subspace cayley_inverse(const Subspace& m, Complex alpha, Complex beta, const Tolerances& tol) {
  require_nonzero(alpha, "alpha");
  require_nonzero(beta, "beta");
  if (m.p() != m.q()) {
    throw Error(ErrorKind::DimensionMismatch, "Cayley transform needs p == q");
  }
  return Subspace::from_image(alpha * (m.first() + m.second()), beta * (m.first() - m.second()),
                              tol);
}

Subspace compose(const Subspace& m, const Subspace& l, const Tolerances& tol) {
  if (m.q() != l.q()) {
    std::ostringstream os;
    os << "compose: middle dimensions differ (" << m.q() << " vs " << l.q() << ")";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  // Q_M zeta = Q_L eta
  Matrix joint(m.q(), m.dim() + l.dim());
  joint << m.second(), -l.second();
  const Matrix null = rank_and_bases(joint, tol).kernel_basis;
  const Matrix zeta = null.topRows(m.dim());
  const Matrix eta = null.bottomRows(l.dim());
  return Subspace::from_image(l.first() * eta, m.first() * zeta, tol);
}

Matrix as_graph(const Subspace& m, const Tolerances& tol) {
  if (m.dim() != m.p() || rank_and_bases(m.first(), tol).rank < m.p()) {
    std::ostringstream os;
    os << "relation of dimension " << m.dim() << " in K^" << m.p() << " x K^" << m.q()
       << " is not the graph of a map on K^" << m.p();
    throw Error(ErrorKind::NotAGraph, os.str());
  }
  // T P = Q  <=>  P^H T^H = Q^H
  const SolveResult s = solve_square(m.first().adjoint(), m.second().adjoint(), tol);
  return s.x.adjoint();
}

}  // namespace dtph
