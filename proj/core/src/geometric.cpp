#include "dtph/geometric.hpp"

#include <algorithm>
#include <sstream>

#include "dtph/error.hpp"

namespace dtph {

GeometricPH GeometricPH::from_map(Eigen::Index n, Eigen::Index r, Eigen::Index m, const Matrix& u,
                                  const Subspace& resistive, const Tolerances& tol) {
  const Eigen::Index k = n + r + m;
  if (u.rows() != k || u.cols() != k) {
    std::ostringstream os;
    os << "map must be " << k << "x" << k << ", got " << u.rows() << "x" << u.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  return {n, r, m, Subspace::from_image(u, Matrix::Identity(k, k), tol), resistive};
}

GeometricValidation validate(const GeometricPH& g, const Tolerances& tol) {
  GeometricValidation out;
  const Eigen::Index k = g.n + g.r + g.m;
  if (g.n < 0 || g.r < 0 || g.m < 0) out.violations.push_back("negative dimension");
  if (g.N.p() != k || g.N.q() != k) {
    std::ostringstream os;
    os << "N must live in K^" << k << " x K^" << k << ", got K^" << g.N.p() << " x K^" << g.N.q();
    out.violations.push_back(os.str());
  }
  if (g.C.p() != g.r || g.C.q() != g.r) {
    std::ostringstream os;
    os << "C must live in K^" << g.r << " x K^" << g.r;
    out.violations.push_back(os.str());
  }
  if (!out.violations.empty()) return out;

  out.n_report = classify(g.N, tol);
  out.c_report = classify(g.C, tol);
  if (!out.n_report.norm_preserving) out.violations.push_back("N is not norm preserving");
  if (g.N.dim() != k) {
    std::ostringstream os;
    os << "N has dimension " << g.N.dim() << ", maximality needs " << k;
    out.violations.push_back(os.str());
  }
  if (!out.c_report.contractive) out.violations.push_back("C is not contractive");
  if (g.C.dim() != g.r) {
    std::ostringstream os;
    os << "C has dimension " << g.C.dim() << ", maximality needs " << g.r;
    out.violations.push_back(os.str());
  }
  out.valid = out.violations.empty();
  return out;
}

namespace {

// Kernel rows of N and Cres stacked over the unknowns (x+, f, y, e). Depends
// only on (N, Cres), so simulations build it once.
struct StepSystem {
  Matrix lhs;
  Matrix from_x;  // rows of N acting on x_k
  Matrix from_u;  // rows of N acting on u_k
  // For a square system, z = gain * (x, u); empty otherwise.
  Matrix gain;
};

StepSystem step_system(const GeometricPH& g, const Tolerances& tol) {
  const Eigen::Index n = g.n, r = g.r, m = g.m;
  const Eigen::Index k = n + r + m;
  const KernelRep kn = to_kernel(g.N, tol);
  const KernelRep kc = to_kernel(g.C, tol);
  const Eigen::Index rows_n = kn.k1.rows();
  const Eigen::Index rows_c = kc.k1.rows();

  // First component of N is (x+, f, y), second (x, e, u).
  StepSystem out;
  out.lhs = Matrix::Zero(rows_n + rows_c, k + r);
  out.lhs.block(0, 0, rows_n, k) = kn.k1;
  out.lhs.block(0, k, rows_n, r) = kn.k2.middleCols(n, r);
  out.lhs.block(rows_n, n, rows_c, r) = kc.k1;
  out.lhs.block(rows_n, k, rows_c, r) = kc.k2;
  out.from_x = kn.k2.leftCols(n);
  out.from_u = kn.k2.rightCols(m);
  return out;
}

GeoStepResult unpack(const GeometricPH& g, const Vector& z, const Vector& x, const Vector& u) {
  const Eigen::Index n = g.n, r = g.r, m = g.m;
  const Eigen::Index k = n + r + m;
  GeoStepResult out;
  out.x_next = z.segment(0, n);
  out.f = z.segment(n, r);
  out.y = z.segment(n + r, m);
  out.e = z.segment(k, r);
  out.power_residual = std::abs(out.x_next.squaredNorm() + out.f.squaredNorm() +
                                out.y.squaredNorm() - x.squaredNorm() - out.e.squaredNorm() -
                                u.squaredNorm());
  return out;
}

Error step_error(const Error& e) {
  const ErrorKind kind =
      e.kind() == ErrorKind::NonUnique ? ErrorKind::NonUniqueStep : ErrorKind::InconsistentStep;
  return Error(kind, e.what());
}

// A square, uniquely solvable step system is consistent for every (x, u), so
// one solve gives the whole step map.
void factor(StepSystem& sys, const Tolerances& tol) {
  if (sys.lhs.rows() != sys.lhs.cols()) return;
  Matrix rhs = Matrix::Zero(sys.lhs.rows(), sys.from_x.cols() + sys.from_u.cols());
  rhs.topLeftCorner(sys.from_x.rows(), sys.from_x.cols()) = -sys.from_x;
  rhs.topRightCorner(sys.from_u.rows(), sys.from_u.cols()) = -sys.from_u;
  try {
    sys.gain = solve_square(sys.lhs, rhs, tol).x;
  } catch (const Error& e) {
    throw step_error(e);
  }
}

GeoStepResult solve_step(const GeometricPH& g, const StepSystem& sys, const Vector& x,
                         const Vector& u, const Tolerances& tol) {
  Vector rhs = Vector::Zero(sys.lhs.rows());
  rhs.head(sys.from_x.rows()) = -(sys.from_x * x + sys.from_u * u);

  SolveResult sol;
  try {
    sol = solve_square(sys.lhs, rhs, tol);
  } catch (const Error& e) {
    throw step_error(e);
  }
  return unpack(g, sol.x.col(0), x, u);
}

}  // namespace

GeoStepResult step(const GeometricPH& g, const Vector& x, const Vector& u, const Tolerances& tol) {
  if (x.size() != g.n || u.size() != g.m) {
    throw Error(ErrorKind::DimensionMismatch, "state or input has wrong size");
  }
  return solve_step(g, step_system(g, tol), x, u, tol);
}

GeoTrajectory simulate(const GeometricPH& g, const Vector& x0, const std::vector<Vector>& inputs,
                       const Tolerances& tol) {
  if (x0.size() != g.n) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong size");
  GeoTrajectory out;
  out.traj.states.push_back(x0);
  StepSystem sys = step_system(g, tol);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Vector& x = out.traj.states.back();
    GeoStepResult s;
    try {
      if (inputs[k].size() != g.m) {
        throw Error(ErrorKind::DimensionMismatch, "state or input has wrong size");
      }
      if (k == 0) factor(sys, tol);
      if (sys.lhs.rows() == sys.lhs.cols()) {
        Vector xu(g.n + g.m);
        xu << x, inputs[k];
        s = unpack(g, sys.gain * xu, x, inputs[k]);
      } else {
        s = solve_step(g, sys, x, inputs[k], tol);
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "step " << k << ": " << e.what();
      throw Error(e.kind(), os.str());
    }
    const double margin = inputs[k].squaredNorm() - s.y.squaredNorm() -
                          (s.x_next.squaredNorm() - x.squaredNorm());
    out.traj.inputs.push_back(inputs[k]);
    out.traj.outputs.push_back(s.y);
    out.traj.residuals.push_back(s.power_residual);
    out.f.push_back(s.f);
    out.e.push_back(s.e);
    out.power_residuals.push_back(s.power_residual);
    out.margins.push_back(margin);
    out.min_margin = k == 0 ? margin : std::min(out.min_margin, margin);
    out.max_power_residual = std::max(out.max_power_residual, s.power_residual);
    out.traj.states.push_back(std::move(s.x_next));
  }
  return out;
}

Matrix halmos_dilation(const Matrix& t) {
  const Eigen::Index p = t.rows();
  const Eigen::Index q = t.cols();
  Matrix u(p + q, q + p);
  u << t, psd_sqrt(Matrix::Identity(p, p) - t * t.adjoint()),
      psd_sqrt(Matrix::Identity(q, q) - t.adjoint() * t), -t.adjoint();
  return u;
}

GeometricPH dilate(const StandardSystem& sys, const StorageWeight& weight, const Tolerances& tol) {
  sys.validate();
  if (sys.inputs() != sys.outputs()) {
    throw Error(ErrorKind::DimensionMismatch, "dilation needs as many outputs as inputs");
  }
  const PhReport ph = is_scattering_ph(sys, weight, tol);
  if (!ph.scattering_ph) {
    std::ostringstream os;
    os << "LMI residual " << ph.lmi_residual << " > 0";
    throw Error(ErrorKind::NotScatteringPH, os.str());
  }
  const Eigen::Index n = sys.states();
  const Eigen::Index m = sys.inputs();
  const Eigen::Index r = n + m;
  const Matrix s = hpd_sqrt(weight.matrix(), tol);
  const Matrix s_inv = solve_square(s, Matrix::Identity(n, n), tol).x;
  const Matrix id_m = Matrix::Identity(m, m);
  const Matrix t = block_diag(s, id_m) * sys.system_matrix() * block_diag(s_inv, id_m);
  // Rows (xi+, y, f), columns (xi, u, e).
  const Matrix h = halmos_dilation(t);

  // Reorder to rows (xi+, f, y) and columns (xi, e, u).
  const Eigen::Index k = n + r + m;
  std::vector<Eigen::Index> row_src(k), col_src(k);
  for (Eigen::Index i = 0; i < n; ++i) row_src[i] = i, col_src[i] = i;
  for (Eigen::Index i = 0; i < r; ++i) row_src[n + i] = n + m + i, col_src[n + i] = n + m + i;
  for (Eigen::Index i = 0; i < m; ++i) row_src[n + r + i] = n + i, col_src[n + r + i] = n + i;
  Matrix u(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) u(i, j) = h(row_src[i], col_src[j]);
  }
  const Subspace zero_graph = Subspace::graph(Matrix::Zero(r, r), tol);
  return GeometricPH::from_map(n, r, m, u, zero_graph, tol);
}

Discretization discretize_dh(const Subspace& m, const Subspace* l, double h,
                             const Tolerances& tol) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  const ClassificationReport mr = classify(m, tol);
  if (!mr.monotone) {
    std::ostringstream os;
    os << "M is not monotone (min eigenvalue " << mr.monotone_min_eig << ")";
    throw Error(ErrorKind::NotMonotone, os.str());
  }
  Subspace lag = l ? *l : Subspace::graph(Matrix::Identity(m.q(), m.q()), tol);
  if (l) {
    const ClassificationReport lr = classify(*l, tol);
    if (!lr.lagrangian) {
      std::ostringstream os;
      os << "L is not Lagrangian (defect " << lr.lagrangian_defect << ")";
      throw Error(ErrorKind::NotLagrangian, os.str());
    }
  }
  Discretization out{cayley(compose(m, lag, tol), Complex(h / 2.0, 0.0), Complex(1.0, 0.0), tol),
                     {}};
  out.report = classify(out.relation, tol);
  if (!l && !out.report.contractive) {
    std::ostringstream os;
    os << "discretized relation is not contractive (min eigenvalue "
       << out.report.contractive_min_eig << ")";
    throw Error(ErrorKind::NotContractive, os.str());
  }
  return out;
}

Vector step_relation(const Subspace& s, const Vector& z, const Tolerances& tol) {
  if (z.size() != s.p()) throw Error(ErrorKind::DimensionMismatch, "state has wrong size");
  return as_graph(s, tol) * z;
}

}  // namespace dtph
