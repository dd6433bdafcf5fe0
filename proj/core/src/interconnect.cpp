#include "dtph/interconnect.hpp"

#include <sstream>

#include "dtph/error.hpp"

namespace dtph {

namespace {

Eigen::Index require_partition(const DescriptorSystem& sys, const char* name) {
  if (!sys.coupled) {
    throw Error(ErrorKind::PortMismatch, std::string(name) + " has no port partition");
  }
  return *sys.coupled;
}

void require_widths(const CouplingRelation& c, Eigen::Index a1, Eigen::Index a2) {
  const Eigen::Index k = c.m11.rows();
  const bool ok = c.m12.rows() == k && c.m21.rows() == k && c.m22.rows() == k &&
                  c.m11.cols() == a1 && c.m12.cols() == a2 && c.m21.cols() == a1 &&
                  c.m22.cols() == a2;
  if (!ok) {
    std::ostringstream os;
    os << "coupling blocks do not match coupled port widths (" << a1 << ", " << a2 << ")";
    throw Error(ErrorKind::PortMismatch, os.str());
  }
}


}  // namespace

CouplingRelation CouplingRelation::redheffer(Eigen::Index width) {
  const Matrix id = Matrix::Identity(width, width);
  const Matrix zero = Matrix::Zero(width, width);
  CouplingRelation c;
  c.m11.resize(2 * width, width);
  c.m12.resize(2 * width, width);
  c.m21.resize(2 * width, width);
  c.m22.resize(2 * width, width);
  // Row block 1: u2^1 - y1^1 = 0. Row block 2: u1^1 - y2^1 = 0.
  c.m11 << zero, id;
  c.m12 << id, zero;
  c.m21 << -id, zero;
  c.m22 << zero, -id;
  return c;
}

CouplingRelation CouplingRelation::gain(const Matrix& k, Eigen::Index width1) {
  const Eigen::Index a = k.rows();
  const Matrix id = Matrix::Identity(a, a);
  // K y - u = 0.
  return {-id.leftCols(width1), -id.rightCols(a - width1), k.leftCols(width1),
          k.rightCols(a - width1)};
}

Subspace CouplingRelation::relation(const Tolerances& tol) const {
  Matrix ku(m11.rows(), m11.cols() + m12.cols());
  Matrix ky(m21.rows(), m21.cols() + m22.cols());
  ku << m11, m12;
  ky << m21, m22;
  return Subspace::from_kernel(ky, ku, tol);
}

ClassificationReport certify_coupling(const CouplingRelation& coupling, const Tolerances& tol) {
  require_widths(coupling, coupling.width1(), coupling.width2());
  const Eigen::Index a = coupling.width1() + coupling.width2();
  if (coupling.m21.cols() + coupling.m22.cols() != a) {
    throw Error(ErrorKind::PortMismatch, "coupled inputs and outputs differ in width");
  }
  const ClassificationReport report = classify(coupling.relation(tol), tol);
  if (!report.contractive) {
    std::ostringstream os;
    os << "coupling violates ||u|| <= ||y|| (min eigenvalue " << report.contractive_min_eig << ")";
    throw Error(ErrorKind::NonContractiveCoupling, os.str());
  }
  if (!report.maximal_contractive) {
    std::ostringstream os;
    os << "coupling relation has dimension " << report.dim << ", expected " << a;
    throw Error(ErrorKind::NonContractiveCoupling, os.str());
  }
  return report;
}

Vector ComposedDescriptor::initial_state(const Vector& x1, const Vector& x2,
                                         const Vector& external_input,
                                         const Tolerances& tol) const {
  const Eigen::Index n12 = x1.size() + x2.size();
  const Eigen::Index total = system.states();
  if (n12 > total || external_input.size() != system.inputs()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state pieces have wrong sizes");
  }
  const Eigen::Index alg = total - n12;
  // Rows past the dynamics: 0 = A_alg x + B_alg u.
  const Matrix a_alg = system.a.bottomRows(alg);
  const Matrix b_alg = system.b.bottomRows(alg);
  Vector xs(n12);
  xs << x1, x2;
  const Vector rhs = -(a_alg.leftCols(n12) * xs + b_alg * external_input);
  const SolveResult s = solve_square(a_alg.rightCols(alg), rhs, tol);
  Vector out(total);
  out << xs, s.x.col(0);
  return out;
}

ComposedDescriptor general_interconnect(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                                        const CouplingRelation& coupling,
                                        const Tolerances& tol) {
  sys1.validate();
  sys2.validate();
  const Eigen::Index a1 = require_partition(sys1, "system 1");
  const Eigen::Index a2 = require_partition(sys2, "system 2");
  require_widths(coupling, a1, a2);
  certify_coupling(coupling, tol);

  const PortBlocks p1 = sys1.ports();
  const PortBlocks p2 = sys2.ports();
  const Eigen::Index n1 = sys1.states(), n2 = sys2.states();
  const Eigen::Index e1 = sys1.inputs() - a1, e2 = sys2.inputs() - a2;
  const Eigen::Index o1 = sys1.outputs() - a1, o2 = sys2.outputs() - a2;
  const Eigen::Index k = coupling.m11.rows();

  // Column offsets of the extended state.
  const Eigen::Index cx1 = 0, cx2 = n1, cu1 = n1 + n2, cu2 = cu1 + a1, cy1 = cu2 + a2,
                     cy2 = cy1 + a1, cols = cy2 + a2;
  // Row offsets.
  const Eigen::Index rd1 = 0, rd2 = n1, ro1 = n1 + n2, ro2 = ro1 + a1, rm = ro2 + a2,
                     rows = rm + k;
  if (rows != cols) {
    std::ostringstream os;
    os << "coupling has " << k << " kernel rows, expected " << (a1 + a2);
    throw Error(ErrorKind::PortMismatch, os.str());
  }

  ComposedDescriptor out;
  DescriptorSystem& s = out.system;
  s.e = Matrix::Zero(rows, cols);
  s.e.block(rd1, cx1, n1, n1) = sys1.e;
  s.e.block(rd2, cx2, n2, n2) = sys2.e;

  s.a = Matrix::Zero(rows, cols);
  s.a.block(rd1, cx1, n1, n1) = sys1.a;
  s.a.block(rd1, cu1, n1, a1) = p1.b1;
  s.a.block(rd2, cx2, n2, n2) = sys2.a;
  s.a.block(rd2, cu2, n2, a2) = p2.b1;
  s.a.block(ro1, cx1, a1, n1) = p1.c1;
  s.a.block(ro1, cu1, a1, a1) = p1.d11;
  s.a.block(ro1, cy1, a1, a1) = -Matrix::Identity(a1, a1);
  s.a.block(ro2, cx2, a2, n2) = p2.c1;
  s.a.block(ro2, cu2, a2, a2) = p2.d11;
  s.a.block(ro2, cy2, a2, a2) = -Matrix::Identity(a2, a2);
  s.a.block(rm, cu1, k, a1) = coupling.m11;
  s.a.block(rm, cu2, k, a2) = coupling.m12;
  s.a.block(rm, cy1, k, a1) = coupling.m21;
  s.a.block(rm, cy2, k, a2) = coupling.m22;

  s.b = Matrix::Zero(rows, e1 + e2);
  s.b.block(rd1, 0, n1, e1) = p1.b2;
  s.b.block(rd2, e1, n2, e2) = p2.b2;
  s.b.block(ro1, 0, a1, e1) = p1.d12;
  s.b.block(ro2, e1, a2, e2) = p2.d12;

  s.c = Matrix::Zero(o1 + o2, cols);
  s.c.block(0, cx1, o1, n1) = p1.c2;
  s.c.block(0, cu1, o1, a1) = p1.d21;
  s.c.block(o1, cx2, o2, n2) = p2.c2;
  s.c.block(o1, cu2, o2, a2) = p2.d21;

  s.d = block_diag(p1.d22, p2.d22);

  out.state_blocks = {{"x1", cx1, n1},  {"x2", cx2, n2},  {"u1^1", cu1, a1},
                      {"u2^1", cu2, a2}, {"y1^1", cy1, a1}, {"y2^1", cy2, a2}};
  out.input_blocks = {{"u1^2", 0, e1}, {"u2^2", e1, e2}};
  out.output_blocks = {{"y1^2", 0, o1}, {"y2^2", o1, o2}};

  IndexReport idx;
  try {
    idx = index_le_one(s.e, s.a, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::NonCausal, e.what());
  }
  if (!idx.index_le_one) {
    std::ostringstream os;
    os << "interconnection is not causal: rank [E, A K_E] = " << idx.rank_augmented << " < "
       << idx.n;
    throw Error(ErrorKind::NonCausal, os.str());
  }
  return out;
}

InvertibilityReport coupling_invertibility(const Matrix& d1, const Matrix& d2,
                                           const Tolerances& tol) {
  if (d1.rows() != d1.cols() || d2.rows() != d2.cols() || d1.rows() != d2.rows()) {
    throw Error(ErrorKind::PortMismatch, "D1^11 and D2^11 must be square of equal size");
  }
  const Eigen::Index a = d1.rows();
  const Matrix id = Matrix::Identity(a, a);
  Matrix block(2 * a, 2 * a);
  block << d1, -id, -id, d2;
  InvertibilityReport r;
  const Matrix m12 = id - d1 * d2;
  const Matrix m21 = id - d2 * d1;
  r.sigma_min_d1d2 = min_singular_value(m12);
  r.sigma_min_d2d1 = min_singular_value(m21);
  r.sigma_min_block = min_singular_value(block);
  // One absolute threshold for all three tests. A relative rank test would
  // call a roundoff-sized I - D1 D2 full rank.
  const double scale = (1.0 + op_norm2(d1)) * (1.0 + op_norm2(d2));
  const double threshold = tol.rank_rtol * static_cast<double>(2 * a) * scale;
  r.i_minus_d1d2 = r.sigma_min_d1d2 > threshold;
  r.i_minus_d2d1 = r.sigma_min_d2d1 > threshold;
  r.kernel_trivial = r.sigma_min_block > threshold;
  if (a == 0) r.i_minus_d1d2 = r.i_minus_d2d1 = r.kernel_trivial = true;
  return r;
}

RedhefferResult redheffer_reduce(const StandardSystem& sys1, const StandardSystem& sys2,
                                 const Tolerances& tol) {
  sys1.validate();
  sys2.validate();
  if (!sys1.coupled || !sys2.coupled) {
    throw Error(ErrorKind::PortMismatch, "both systems need a port partition");
  }
  const Eigen::Index a = *sys1.coupled;
  if (*sys2.coupled != a) {
    throw Error(ErrorKind::PortMismatch, "Redheffer coupling needs equal coupled widths");
  }
  const PortBlocks p1 = sys1.ports();
  const PortBlocks p2 = sys2.ports();

  RedhefferResult out;
  out.invertibility = coupling_invertibility(p1.d11, p2.d11, tol);
  if (!out.invertibility.invertible()) {
    std::ostringstream os;
    os << "ker [[D1^11, -I], [-I, D2^11]] is nontrivial (sigma_min = "
       << out.invertibility.sigma_min_block << ")";
    throw Error(ErrorKind::CouplingSingular, os.str());
  }

  // K (u1^1, u2^1) = -(C^1 x + D^12 u^2) with K = [[D1^11, -I], [-I, D2^11]].
  const Matrix id = Matrix::Identity(a, a);
  Matrix k(2 * a, 2 * a);
  k << p1.d11, -id, -id, p2.d11;
  const Matrix a_blk = block_diag(sys1.a, sys2.a);
  const Matrix b1 = block_diag(p1.b1, p2.b1);
  const Matrix b2 = block_diag(p1.b2, p2.b2);
  const Matrix c1 = block_diag(p1.c1, p2.c1);
  const Matrix c2 = block_diag(p1.c2, p2.c2);
  const Matrix d12 = block_diag(p1.d12, p2.d12);
  const Matrix d21 = block_diag(p1.d21, p2.d21);
  const Matrix d22 = block_diag(p1.d22, p2.d22);

  Matrix rhs(2 * a, c1.cols() + d12.cols());
  rhs << c1, d12;
  const Matrix g = solve_square(k, rhs, tol).x;  // K^{-1} [C^1, D^12]
  const Matrix gx = g.leftCols(c1.cols());
  const Matrix gu = g.rightCols(d12.cols());

  out.reduced.a = a_blk - b1 * gx;
  out.reduced.b = b2 - b1 * gu;
  out.reduced.c = c2 - d21 * gx;
  out.reduced.d = d22 - d21 * gu;
  return out;
}

RedhefferResult redheffer_reduce(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                                 const Tolerances& tol) {
  if (!sys1.has_identity_e() || !sys2.has_identity_e()) {
    throw Error(ErrorKind::NotIdentityE, "Redheffer reduction requires E1 = E2 = I");
  }
  return redheffer_reduce(StandardSystem{sys1.a, sys1.b, sys1.c, sys1.d, sys1.coupled},
                          StandardSystem{sys2.a, sys2.b, sys2.c, sys2.d, sys2.coupled}, tol);
}

Matrix closed_loop_matrix(const StandardSystem& sys1, const StandardSystem& sys2,
                          const Tolerances& tol) {
  sys1.validate();
  sys2.validate();
  if (sys1.inputs() != sys2.outputs() || sys2.inputs() != sys1.outputs()) {
    throw Error(ErrorKind::DimensionMismatch,
                "feedback needs inputs of each system to match outputs of the other");
  }
  const Eigen::Index n1 = sys1.states();
  const Eigen::Index n2 = sys2.states();
  const Eigen::Index m1 = sys1.inputs();
  // (I - D2 D1) u1 = D2 C1 x1 + C2 x2,  u2 = C1 x1 + D1 u1
  const Matrix f = Matrix::Identity(m1, m1) - sys2.d * sys1.d;
  Matrix rhs(m1, n1 + n2);
  rhs << sys2.d * sys1.c, sys2.c;
  Matrix u1_of_x;
  try {
    u1_of_x = solve_square(f, rhs, tol).x;
  } catch (const Error& e) {
    throw Error(ErrorKind::FeedbackSingular, std::string("I - D2 D1 is singular: ") + e.what());
  }
  Matrix c1_full(sys1.outputs(), n1 + n2);
  c1_full << sys1.c, Matrix::Zero(sys1.outputs(), n2);
  const Matrix u2_of_x = c1_full + sys1.d * u1_of_x;

  Matrix ahat = block_diag(sys1.a, sys2.a);
  ahat.topRows(n1) += sys1.b * u1_of_x;
  ahat.bottomRows(n2) += sys2.b * u2_of_x;
  return ahat;
}

ClosedLoopReport closed_loop(const StandardSystem& sys1, const StandardSystem& sys2,
                             const StorageWeight& x1, const StorageWeight& x2,
                             const Tolerances& tol) {
  ClosedLoopReport r;
  r.ahat = closed_loop_matrix(sys1, sys2, tol);
  const StorageWeight xh = compose_storage(x1, x2, tol);
  if (xh.size() != r.ahat.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "weights do not match the system states");
  }
  const Matrix& x = xh.matrix();
  const PsdReport neg = is_psd(x - r.ahat.adjoint() * x * r.ahat, tol);
  r.lmi_max_eig = -neg.min_eigenvalue;
  r.contractive = neg.psd;

  const Matrix s = hpd_sqrt(x, tol);
  const Matrix id = Matrix::Identity(x.rows(), x.cols());
  r.weighted_norm = op_norm2(s * r.ahat * solve_square(s, id, tol).x);
  r.literal_norm = op_norm2(x * r.ahat * solve_square(x, id, tol).x);
  r.literal_contractive = r.literal_norm <= 1.0 + tol.psd_atol * (1.0 + r.literal_norm);
  return r;
}

Trajectory elimination_oracle(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                              const CouplingRelation& coupling, const std::vector<Vector>& inputs,
                              const Vector& x1, const Vector& x2, const Tolerances& tol) {
  sys1.validate();
  sys2.validate();
  const Eigen::Index a1 = require_partition(sys1, "system 1");
  const Eigen::Index a2 = require_partition(sys2, "system 2");
  require_widths(coupling, a1, a2);
  const PortBlocks p1 = sys1.ports();
  const PortBlocks p2 = sys2.ports();
  const Eigen::Index n1 = sys1.states(), n2 = sys2.states();
  const Eigen::Index e1 = sys1.inputs() - a1, e2 = sys2.inputs() - a2;
  const Eigen::Index k = coupling.m11.rows();
  if (x1.size() != n1 || x2.size() != n2) {
    throw Error(ErrorKind::DimensionMismatch, "initial states have wrong sizes");
  }

  // Unknown ordering: x1+, x2+, u1^1, u2^1, y1^1, y2^1.
  const Eigen::Index cu1 = n1 + n2, cu2 = cu1 + a1, cy1 = cu2 + a2, cy2 = cy1 + a1,
                     cols = cy2 + a2;
  const Eigen::Index ro1 = n1 + n2, ro2 = ro1 + a1, rm = ro2 + a2, rows = rm + k;
  Matrix lhs = Matrix::Zero(rows, cols);
  lhs.block(0, 0, n1, n1) = sys1.e;
  lhs.block(0, cu1, n1, a1) = -p1.b1;
  lhs.block(n1, n1, n2, n2) = sys2.e;
  lhs.block(n1, cu2, n2, a2) = -p2.b1;
  lhs.block(ro1, cu1, a1, a1) = p1.d11;
  lhs.block(ro1, cy1, a1, a1) = -Matrix::Identity(a1, a1);
  lhs.block(ro2, cu2, a2, a2) = p2.d11;
  lhs.block(ro2, cy2, a2, a2) = -Matrix::Identity(a2, a2);
  lhs.block(rm, cu1, k, a1) = coupling.m11;
  lhs.block(rm, cu2, k, a2) = coupling.m12;
  lhs.block(rm, cy1, k, a1) = coupling.m21;
  lhs.block(rm, cy2, k, a2) = coupling.m22;

  Trajectory traj;
  Vector x(n1 + n2);
  x << x1, x2;
  traj.states.push_back(x);
  for (std::size_t step = 0; step < inputs.size(); ++step) {
    const Vector& u = inputs[step];
    if (u.size() != e1 + e2) throw Error(ErrorKind::DimensionMismatch, "input has wrong size");
    const Vector xa = x.head(n1), xb = x.tail(n2);
    const Vector ua = u.head(e1), ub = u.tail(e2);
    Vector rhs = Vector::Zero(rows);
    rhs.segment(0, n1) = sys1.a * xa + p1.b2 * ua;
    rhs.segment(n1, n2) = sys2.a * xb + p2.b2 * ub;
    rhs.segment(ro1, a1) = -(p1.c1 * xa + p1.d12 * ua);
    rhs.segment(ro2, a2) = -(p2.c1 * xb + p2.d12 * ub);
    SolveResult sol;
    try {
      sol = solve_square(lhs, rhs, tol);
    } catch (const Error& e) {
      const ErrorKind kind =
          e.kind() == ErrorKind::NonUnique ? ErrorKind::NonUniqueStep : ErrorKind::InconsistentStep;
      std::ostringstream os;
      os << "step " << step << ": " << e.what();
      throw Error(kind, os.str());
    }
    const Vector z = sol.x.col(0);
    const Vector u11 = z.segment(cu1, a1), u21 = z.segment(cu2, a2);
    Vector y(p1.c2.rows() + p2.c2.rows());
    y << p1.c2 * xa + p1.d21 * u11 + p1.d22 * ua, p2.c2 * xb + p2.d21 * u21 + p2.d22 * ub;
    traj.inputs.push_back(u);
    traj.outputs.push_back(y);
    traj.residuals.push_back(sol.residual);
    x = z.head(n1 + n2);
    traj.states.push_back(x);
  }
  return traj;
}

StorageWeight compose_storage(const StorageWeight& x1, const StorageWeight& x2,
                              const Tolerances& tol) {
  return StorageWeight(block_diag(x1.matrix(), x2.matrix()), tol);
}

}  // namespace dtph
