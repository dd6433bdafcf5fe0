#include "dtph/systems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "dtph/error.hpp"

namespace dtph {

namespace {

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << name << " must be " << rows << "x" << cols << ", got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

void check_partition(const std::optional<Eigen::Index>& coupled, Eigen::Index inputs,
                     Eigen::Index outputs) {
  if (!coupled) return;
  if (*coupled < 0 || *coupled > inputs || *coupled > outputs) {
    std::ostringstream os;
    os << "port partition m1 = " << *coupled << " does not fit " << inputs << " inputs and "
       << outputs << " outputs";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

std::string step_message(std::size_t k, const Error& e) {
  std::ostringstream os;
  os << "step " << k << ": " << e.what();
  return os.str();
}

}  // namespace

PortBlocks split_ports(const Matrix& b, const Matrix& c, const Matrix& d, Eigen::Index coupled) {
  const Eigen::Index m = b.cols();
  const Eigen::Index p = c.rows();
  check_partition(coupled, m, p);
  PortBlocks out;
  out.b1 = b.leftCols(coupled);
  out.b2 = b.rightCols(m - coupled);
  out.c1 = c.topRows(coupled);
  out.c2 = c.bottomRows(p - coupled);
  out.d11 = d.topLeftCorner(coupled, coupled);
  out.d12 = d.topRightCorner(coupled, m - coupled);
  out.d21 = d.bottomLeftCorner(p - coupled, coupled);
  out.d22 = d.bottomRightCorner(p - coupled, m - coupled);
  return out;
}

void StandardSystem::validate() const {
  const Eigen::Index n = a.rows();
  require_shape(a, n, n, "A");
  require_shape(b, n, b.cols(), "B");
  require_shape(c, c.rows(), n, "C");
  require_shape(d, c.rows(), b.cols(), "D");
  for (const auto* m : {&a, &b, &c, &d}) require_finite(*m, "system matrix");
  check_partition(coupled, inputs(), outputs());
}

PortBlocks StandardSystem::ports() const { return split_ports(b, c, d, coupled.value_or(0)); }

Matrix StandardSystem::system_matrix() const {
  Matrix m(states() + outputs(), states() + inputs());
  m << a, b, c, d;
  return m;
}

DescriptorSystem DescriptorSystem::from_standard(const StandardSystem& sys) {
  return {Matrix::Identity(sys.states(), sys.states()), sys.a, sys.b, sys.c, sys.d, sys.coupled};
}

void DescriptorSystem::validate() const {
  const Eigen::Index n = a.rows();
  require_shape(e, n, n, "E");
  StandardSystem{a, b, c, d, coupled}.validate();
  require_finite(e, "E");
}

PortBlocks DescriptorSystem::ports() const { return split_ports(b, c, d, coupled.value_or(0)); }

bool DescriptorSystem::has_identity_e() const {
  return e.rows() == e.cols() && e == Matrix::Identity(e.rows(), e.cols());
}

StorageWeight::StorageWeight(const Matrix& x, const Tolerances& tol) {
  if (x.rows() != x.cols()) {
    std::ostringstream os;
    os << "storage weight must be square, got " << x.rows() << "x" << x.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  require_finite(x, "storage weight");
  const double asym = (x - x.adjoint()).norm();
  if (asym > tol.residual_rtol * (1.0 + x.norm())) {
    std::ostringstream os;
    os << "storage weight is not Hermitian (||X - X^H|| = " << asym << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  x_ = hermitian_part(x);
  const PsdReport psd = is_psd(x_, tol);
  if (x_.rows() > 0 && psd.min_eigenvalue <= psd.slack) {
    std::ostringstream os;
    os << "storage weight has smallest eigenvalue " << psd.min_eigenvalue;
    throw Error(ErrorKind::NotPositiveDefinite, os.str());
  }
}

double StorageWeight::hamiltonian(const Vector& state) const {
  return 0.5 * (state.adjoint() * x_ * state)(0, 0).real();
}

IndexReport index_le_one(const Matrix& e, const Matrix& a, const Tolerances& tol) {
  const Eigen::Index n = a.rows();
  require_shape(a, n, n, "A");
  require_shape(e, n, n, "E");

  // Regularity: det(lambda E - A) not identically zero.
  static const std::array<Complex, 5> probes = {
      Complex(0.5772156649, 0.0), Complex(-1.6180339887, 0.0), Complex(0.3183098862, 1.4142135624),
      Complex(2.7182818285, -0.6931471806), Complex(-0.4142135624, 0.7071067812)};
  bool regular = n == 0;
  for (const Complex& lambda : probes) {
    if (regular) break;
    regular = rank_and_bases(lambda * e - a, tol).rank == n;
  }
  if (!regular) {
    throw Error(ErrorKind::SingularPencil, "det(lambda E - A) vanishes at every probe lambda");
  }

  IndexReport report;
  report.n = n;
  const RankBases re = rank_and_bases(e, tol);
  report.rank_e = re.rank;
  Matrix aug(n, n + re.kernel_basis.cols());
  aug << e, a * re.kernel_basis;
  report.rank_augmented = rank_and_bases(aug, tol).rank;
  report.index_le_one = report.rank_augmented == n;
  return report;
}

Reduction reduce_to_standard(const DescriptorSystem& sys, const Tolerances& tol) {
  sys.validate();
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();

  const IndexReport idx = index_le_one(sys.e, sys.a, tol);
  if (!idx.index_le_one) {
    std::ostringstream os;
    os << "rank [E, A K_E] = " << idx.rank_augmented << " < " << n;
    throw Error(ErrorKind::IndexTooHigh, os.str());
  }

  Reduction out;
  if (sys.has_identity_e()) {
    out.reduced = {sys.a, sys.b, sys.c, sys.d, sys.coupled};
    out.phi = Matrix::Identity(n, n);
    out.psi = Matrix::Zero(n, m);
    out.project = Matrix::Identity(n, n);
    return out;
  }
  if (idx.rank_e == n) {
    Matrix rhs(n, n + m);
    rhs << sys.a, sys.b;
    const Matrix sol = solve_square(sys.e, rhs, tol).x;
    out.reduced = {sol.leftCols(n), sol.rightCols(m), sys.c, sys.d, sys.coupled};
    out.phi = Matrix::Identity(n, n);
    out.psi = Matrix::Zero(n, m);
    out.project = Matrix::Identity(n, n);
    return out;
  }

  // E = U diag(Sigma_r, 0) V^H; work in x = V xh with equations premultiplied by U^H.
  Matrix u, v;
  Eigen::VectorXd sigma;
  if (is_real(sys.e)) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.e.real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU().cast<Complex>();
    v = svd.matrixV().cast<Complex>();
    sigma = svd.singularValues();
  } else {
    Eigen::JacobiSVD<Matrix> svd(sys.e, Eigen::ComputeFullU | Eigen::ComputeFullV);
    u = svd.matrixU();
    v = svd.matrixV();
    sigma = svd.singularValues();
  }
  const Eigen::Index r = idx.rank_e;
  const Eigen::Index s = n - r;
  const Matrix at = u.adjoint() * sys.a * v;
  const Matrix bt = u.adjoint() * sys.b;
  const Matrix ct = sys.c * v;

  Matrix rhs(s, r + m);
  rhs << at.bottomLeftCorner(s, r), bt.bottomRows(s);
  SolveResult g;
  try {
    g = solve_square(at.bottomRightCorner(s, s), rhs, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::IndexTooHigh, std::string("algebraic block not invertible: ") + e.what());
  }
  const Matrix gx = g.x.leftCols(r);
  const Matrix gu = g.x.rightCols(m);
  const Eigen::VectorXcd inv_sigma = sigma.head(r).cwiseInverse().cast<Complex>();

  out.reduced.a = inv_sigma.asDiagonal() * (at.topLeftCorner(r, r) - at.topRightCorner(r, s) * gx);
  out.reduced.b = inv_sigma.asDiagonal() * (bt.topRows(r) - at.topRightCorner(r, s) * gu);
  out.reduced.c = ct.leftCols(r) - ct.rightCols(s) * gx;
  out.reduced.d = sys.d - ct.rightCols(s) * gu;
  out.reduced.coupled = sys.coupled;
  out.phi = v.leftCols(r) - v.rightCols(s) * gx;
  out.psi = -v.rightCols(s) * gu;
  out.project = v.leftCols(r).adjoint();
  return out;
}

double consistency_residual(const DescriptorSystem& sys, const Vector& x, const Vector& u,
                            const Tolerances& tol) {
  const Matrix z = left_kernel_basis(sys.e, tol);
  if (z.cols() == 0) return 0.0;
  return (z.adjoint() * (sys.a * x + sys.b * u)).norm();
}

Trajectory simulate_standard(const StandardSystem& sys, const Vector& x0,
                             const std::vector<Vector>& inputs) {
  sys.validate();
  if (x0.size() != sys.states()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state has wrong size");
  }
  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.states.push_back(x0);
  for (const Vector& u : inputs) {
    if (u.size() != sys.inputs()) {
      throw Error(ErrorKind::DimensionMismatch, "input has wrong size");
    }
    const Vector& x = traj.states.back();
    traj.outputs.push_back(sys.c * x + sys.d * u);
    traj.states.push_back(sys.a * x + sys.b * u);
    traj.inputs.push_back(u);
    traj.residuals.push_back(0.0);
  }
  return traj;
}

Trajectory simulate_descriptor(const DescriptorSystem& sys, const Vector& x0,
                               const std::vector<Vector>& inputs, const Tolerances& tol) {
  sys.validate();
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();
  if (x0.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "initial state has wrong size");
  }
  for (const Vector& u : inputs) {
    if (u.size() != m) throw Error(ErrorKind::DimensionMismatch, "input has wrong size");
  }
  const IndexReport idx = index_le_one(sys.e, sys.a, tol);
  if (!idx.index_le_one) {
    std::ostringstream os;
    os << "rank [E, A K_E] = " << idx.rank_augmented << " < " << n;
    throw Error(ErrorKind::IndexTooHigh, os.str());
  }

  const Matrix z = left_kernel_basis(sys.e, tol);
  const Matrix za = z.adjoint() * sys.a;
  const Matrix zb = z.adjoint() * sys.b;
  Matrix lhs(n + z.cols(), n);
  lhs << sys.e, za;

  const Vector zero_u = Vector::Zero(m);
  const Vector& u0 = inputs.empty() ? zero_u : inputs.front();
  const double r0 = (za * x0 + zb * u0).norm();
  const double scale = op_norm2(sys.a) * x0.norm() + op_norm2(sys.b) * u0.norm();
  if (r0 > tol.residual_rtol * scale) {
    std::ostringstream os;
    os << "algebraic residual " << r0 << " at k = 0";
    throw Error(ErrorKind::InconsistentInitialState, os.str());
  }

  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.states.push_back(x0);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Vector& x = traj.states.back();
    const Vector& u = inputs[k];
    const Vector& u_next = k + 1 < inputs.size() ? inputs[k + 1] : zero_u;
    Vector rhs(n + z.cols());
    rhs << sys.a * x + sys.b * u, -zb * u_next;
    SolveResult step;
    try {
      step = solve_square(lhs, rhs, tol);
    } catch (const Error& e) {
      const ErrorKind kind =
          e.kind() == ErrorKind::NonUnique ? ErrorKind::NonUniqueStep : ErrorKind::InconsistentStep;
      throw Error(kind, step_message(k, e));
    }
    traj.outputs.push_back(sys.c * x + sys.d * u);
    traj.inputs.push_back(u);
    traj.residuals.push_back(step.residual);
    traj.states.push_back(step.x.col(0));
  }
  return traj;
}

DissipationReport check_dissipation(const Trajectory& traj, const Matrix& weight, const Matrix& e,
                                    const Tolerances& tol) {
  if (weight.rows() != weight.cols() || e.rows() != weight.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "weight and E sizes do not match");
  }
  if (traj.states.size() != traj.inputs.size() + 1 ||
      traj.outputs.size() != traj.inputs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "trajectory lengths are inconsistent");
  }
  const auto storage = [&](const Vector& x) {
    const Vector xi = e * x;
    return (xi.adjoint() * weight * xi)(0, 0).real();
  };
  DissipationReport report;
  report.min_margin = 0.0;
  double v_now = storage(traj.states.front());
  for (std::size_t k = 0; k < traj.inputs.size(); ++k) {
    const double v_next = storage(traj.states[k + 1]);
    const double supply = traj.inputs[k].squaredNorm() - traj.outputs[k].squaredNorm();
    const double margin = supply - (v_next - v_now);
    const double scale = traj.inputs[k].squaredNorm() + traj.outputs[k].squaredNorm() +
                         std::abs(v_now) + std::abs(v_next);
    report.margins.push_back(margin);
    if (k == 0 || margin < report.min_margin) report.min_margin = margin;
    if (margin < -tol.psd_atol * (1.0 + scale)) report.passive = false;
    v_now = v_next;
  }
  return report;
}

DissipationReport check_dissipation(const Trajectory& traj, const StorageWeight& weight,
                                    const Matrix& e, const Tolerances& tol) {
  return check_dissipation(traj, weight.matrix(), e, tol);
}

PhReport is_scattering_ph(const StandardSystem& sys, const StorageWeight& weight,
                          const Tolerances& tol) {
  sys.validate();
  if (weight.size() != sys.states()) {
    std::ostringstream os;
    os << "weight is " << weight.size() << "x" << weight.size() << " but the system has "
       << sys.states() << " states";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  const Matrix& x = weight.matrix();
  const Matrix m = sys.system_matrix();
  const Matrix w_out = block_diag(x, Matrix::Identity(sys.outputs(), sys.outputs()));
  const Matrix w_in = block_diag(x, Matrix::Identity(sys.inputs(), sys.inputs()));
  const Matrix lmi = hermitian_part(m.adjoint() * w_out * m - w_in);

  PhReport report;
  const PsdReport neg = is_psd(-lmi, tol);
  report.lmi_residual = -neg.min_eigenvalue;
  report.scattering_ph = neg.psd;

  const Matrix s = hpd_sqrt(x, tol);
  const Matrix s_inv = solve_square(s, Matrix::Identity(s.rows(), s.cols()), tol).x;
  const Matrix t = block_diag(s, Matrix::Identity(sys.outputs(), sys.outputs())) * m *
                   block_diag(s_inv, Matrix::Identity(sys.inputs(), sys.inputs()));
  report.weighted_norm = op_norm2(t);
  return report;
}

namespace {

// One run of X <- A^H X A + C^H C + eps I + L^H R^{-1} L from X0 = C^H C + x0_shift I.
std::optional<Matrix> riccati_run(const StandardSystem& sys, double eps, double x0_shift,
                                  const WeightSearchOptions& options, std::string& why) {
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();
  const Matrix& a = sys.a;
  const Matrix& b = sys.b;
  const Matrix ctc = sys.c.adjoint() * sys.c;
  const Matrix dtc = sys.d.adjoint() * sys.c;
  const Matrix base_r = Matrix::Identity(m, m) - sys.d.adjoint() * sys.d;
  const Matrix id = Matrix::Identity(n, n);

  Matrix x = ctc + x0_shift * id;
  const double blowup = 1e12 * (1.0 + x.norm());
  for (int it = 0; it < options.max_iters; ++it) {
    const Matrix r = hermitian_part(base_r - b.adjoint() * x * b);
    Eigen::LLT<Matrix> llt(r);
    if (m > 0 && llt.info() != Eigen::Success) {
      why = "I - D^H D - B^H X B lost positive definiteness";
      return std::nullopt;
    }
    const Matrix l = b.adjoint() * x * a + dtc;
    Matrix next = a.adjoint() * x * a + ctc + eps * id;
    if (m > 0) next += l.adjoint() * llt.solve(l);
    next = hermitian_part(next);
    if (!next.allFinite() || next.norm() > blowup) {
      why = "iteration diverged";
      return std::nullopt;
    }
    const double change = (next - x).norm();
    x = std::move(next);
    if (change <= options.convergence_rtol * (1.0 + x.norm())) return x;
  }
  why = "iteration limit reached";
  return std::nullopt;
}

}  // namespace

StorageWeight find_storage_weight(const StandardSystem& sys, const Tolerances& tol,
                                  const WeightSearchOptions& options) {
  sys.validate();
  const Eigen::Index n = sys.states();

  const auto verified = [&](const Matrix& x) -> std::optional<StorageWeight> {
    try {
      StorageWeight w(x, tol);
      if (is_scattering_ph(sys, w, tol).scattering_ph) return w;
    } catch (const Error&) {
    }
    return std::nullopt;
  };

  if (auto w = verified(Matrix::Identity(n, n))) return *w;

  const double scale = 1.0 + (sys.c.adjoint() * sys.c).norm();
  std::string last_reason = "no candidate";
  for (const double eps : {1e-2, 1e-4, 1e-6, 1e-8, 0.0}) {
    const double shift = eps > 0.0 ? eps * scale : 1e-8 * scale;
    std::string why;
    const std::optional<Matrix> x = riccati_run(sys, eps * scale, shift, options, why);
    if (!x) {
      last_reason = why;
      continue;
    }
    if (auto w = verified(*x)) return *w;
    last_reason = "converged X failed the positivity or LMI check";
  }
  throw Error(ErrorKind::NotFound, last_reason);
}

}  // namespace dtph
