#include <gtest/gtest.h>

#include "generators.hpp"

namespace dtph {
namespace {

using testing::Rng;

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }
Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no dtph::Error thrown";
  return ErrorKind::ParseError;
}

double max_output_gap(const Trajectory& a, const Trajectory& b) {
  double gap = 0.0;
  for (std::size_t k = 0; k < a.outputs.size(); ++k) {
    gap = std::max(gap, (a.outputs[k] - b.outputs[k]).norm() / (1.0 + b.outputs[k].norm()));
  }
  return gap;
}

TEST(Validate, RejectsShapeMismatch) {
  const StandardSystem sys{eye(2), Matrix::Zero(3, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1), {}};
  EXPECT_EQ(kind_of([&] { sys.validate(); }), ErrorKind::DimensionMismatch);
}

TEST(Validate, PartitionMustFitPorts) {
  StandardSystem sys{eye(1), Matrix::Zero(1, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 2), 3};
  EXPECT_THROW(sys.validate(), Error);
  sys.coupled = 1;
  EXPECT_NO_THROW(sys.validate());
  const PortBlocks p = sys.ports();
  EXPECT_EQ(p.b1.cols(), 1);
  EXPECT_EQ(p.d22.rows(), 1);
}

TEST(StorageWeightTest, RejectsInvalidWeights) {
  Matrix nonsym = eye(2);
  nonsym(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { StorageWeight w(nonsym); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { StorageWeight w(-eye(2)); }), ErrorKind::NotPositiveDefinite);
  EXPECT_EQ(kind_of([] { StorageWeight w(Matrix::Zero(2, 3)); }), ErrorKind::DimensionMismatch);
  const StorageWeight w(2.0 * eye(2));
  EXPECT_DOUBLE_EQ(w.hamiltonian(Vector::Ones(2)), 2.0);
}

TEST(IndexLeOne, Examples) {
  EXPECT_TRUE(index_le_one(eye(3), eye(3)).index_le_one);
  Matrix e = Matrix::Zero(2, 2);
  e(0, 0) = 1.0;
  EXPECT_TRUE(index_le_one(e, eye(2)).index_le_one);
  Matrix nil = Matrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  EXPECT_FALSE(index_le_one(nil, eye(2)).index_le_one);
}

TEST(IndexLeOne, SingularPencilRejected) {
  EXPECT_EQ(kind_of([] { index_le_one(Matrix::Zero(2, 2), Matrix::Zero(2, 2)); }),
            ErrorKind::SingularPencil);
}

TEST(IndexLeOne, InvariantUnderEquivalence) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const bool cplx = trial % 2 == 0;
    const DescriptorSystem one = testing::random_index_one(rng, 2, 2, 1, 1, cplx);
    const auto [e2, a2] = testing::random_index_two(rng, 2, cplx);
    const Matrix l = testing::random_with_singular_values(rng, 4, 4, 0.5, 2.0, cplx);
    const Matrix r = testing::random_with_singular_values(rng, 4, 4, 0.5, 2.0, cplx);
    EXPECT_TRUE(index_le_one(one.e, one.a).index_le_one);
    EXPECT_TRUE(index_le_one(l * one.e * r, l * one.a * r).index_le_one);
    EXPECT_FALSE(index_le_one(e2, a2).index_le_one);
    EXPECT_FALSE(index_le_one(l * e2 * r, l * a2 * r).index_le_one);
  }
}

TEST(Reduce, IdentityEIsUnchanged) {
  Rng rng(42);
  const StandardSystem s = testing::random_ph_system(rng, 3, 2, 2, true).sys;
  const Reduction red = reduce_to_standard(DescriptorSystem::from_standard(s));
  EXPECT_EQ(red.reduced.a, s.a);
  EXPECT_EQ(red.reduced.d, s.d);
  EXPECT_EQ(red.phi, eye(3));
  EXPECT_EQ(red.psi.norm(), 0.0);
}

TEST(Reduce, BlockSystemEliminatesAlgebraicPart) {
  // E = diag(1, 0), A = diag(a11, 1): x2 = -b2 u.
  DescriptorSystem sys;
  sys.e = Matrix::Zero(2, 2);
  sys.e(0, 0) = 1.0;
  sys.a = eye(2);
  sys.a(0, 0) = 0.5;
  sys.b = Matrix(2, 1);
  sys.b << 1.0, 3.0;
  sys.c = Matrix(1, 2);
  sys.c << 2.0, 1.0;
  sys.d = scalar(0.25);
  const Reduction red = reduce_to_standard(sys);
  ASSERT_EQ(red.reduced.states(), 1);
  // Transfer function of the hand elimination: 2/(z - 0.5) + (0.25 - 3).
  const Complex z(1.3, 0.4);
  const Matrix g = red.reduced.c * (z * eye(1) - red.reduced.a).inverse() * red.reduced.b +
                   red.reduced.d;
  EXPECT_LT(std::abs(g(0, 0) - (2.0 / (z - 0.5) - 2.75)), 1e-12);
  const Vector x = red.psi * Vector::Ones(1);
  EXPECT_LT(std::abs(x(1) + 3.0), 1e-12);
}

TEST(Reduce, RandomIndexOneIsIoEquivalent) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const bool cplx = trial % 2 == 0;
    const DescriptorSystem sys = testing::random_index_one(
        rng, testing::uniform_int(rng, 1, 3), testing::uniform_int(rng, 1, 3), 2, 2, cplx);
    const Reduction red = reduce_to_standard(sys);
    const std::vector<Vector> u = testing::random_inputs(rng, 50, 2, cplx);
    const Vector xr0 = testing::random_vector(rng, red.reduced.states(), cplx);
    const Trajectory reduced = simulate_standard(red.reduced, xr0, u);
    const Trajectory full = simulate_descriptor(sys, red.phi * xr0 + red.psi * u[0], u);
    EXPECT_LT(max_output_gap(full, reduced), 1e-8);
    EXPECT_LT((red.project * full.states[10] - reduced.states[10]).norm(), 1e-8);
  }
}

TEST(Reduce, IndexTwoRejected) {
  Rng rng(44);
  const auto [e, a] = testing::random_index_two(rng, 1, false);
  const DescriptorSystem sys{e, a, Matrix::Ones(3, 1), Matrix::Ones(1, 3), scalar(0.0), {}};
  EXPECT_EQ(kind_of([&] { reduce_to_standard(sys); }), ErrorKind::IndexTooHigh);
}

TEST(SimulateStandard, Examples) {
  const std::vector<Vector> u(5, Vector::Ones(1));
  Trajectory t = simulate_standard({scalar(0.0), scalar(0.0), scalar(1.0), scalar(0.0), {}},
                                   Vector::Ones(1), u);
  for (std::size_t k = 1; k < t.states.size(); ++k) EXPECT_EQ(t.states[k].norm(), 0.0);

  Vector v(2);
  v << 1.0, -2.0;
  t = simulate_standard({eye(2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), scalar(0.0), {}}, v, u);
  for (const Vector& x : t.states) EXPECT_EQ(x, v);

  const std::vector<Vector> zero(8, Vector::Zero(1));
  t = simulate_standard({scalar(0.5), scalar(1.0), scalar(1.0), scalar(0.0), {}}, Vector::Ones(1),
                        zero);
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    EXPECT_DOUBLE_EQ(t.states[k](0).real(), std::ldexp(1.0, -static_cast<int>(k)));
  }
  EXPECT_EQ(t.states.size(), 9u);
  EXPECT_EQ(t.outputs.size(), 8u);
}

TEST(SimulateDescriptor, IdentityEMatchesStandard) {
  Rng rng(45);
  const StandardSystem s = testing::random_ph_system(rng, 3, 2, 2, true).sys;
  const std::vector<Vector> u = testing::random_inputs(rng, 20, 2, true);
  const Vector x0 = testing::random_vector(rng, 3, true);
  const Trajectory a = simulate_standard(s, x0, u);
  const Trajectory b = simulate_descriptor(DescriptorSystem::from_standard(s), x0, u);
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    EXPECT_LT((a.states[k] - b.states[k]).norm(), 1e-12 * (1.0 + a.states[k].norm()));
  }
}

TEST(SimulateDescriptor, PureAlgebraicSystem) {
  Rng rng(46);
  const Matrix b = testing::random_matrix(rng, 2, 1, false);
  const DescriptorSystem sys{Matrix::Zero(2, 2), eye(2), b, Matrix::Zero(1, 2), scalar(0.0), {}};
  const std::vector<Vector> u = testing::random_inputs(rng, 6, 1, false);
  const Trajectory t = simulate_descriptor(sys, -b * u[0], u);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_LT((t.states[k] + b * u[k]).norm(), 1e-12);
}

TEST(SimulateDescriptor, InconsistentInitialStateRejected) {
  const DescriptorSystem sys{Matrix::Zero(1, 1), eye(1), scalar(1.0), scalar(1.0), scalar(0.0), {}};
  const std::vector<Vector> u(3, Vector::Ones(1));
  EXPECT_EQ(kind_of([&] { simulate_descriptor(sys, Vector::Ones(1), u); }),
            ErrorKind::InconsistentInitialState);
}

TEST(CheckDissipation, ZeroTrajectory) {
  const StandardSystem s{eye(2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), scalar(0.0), {}};
  const Trajectory t = simulate_standard(s, Vector::Zero(2), std::vector<Vector>(5, Vector::Zero(1)));
  const DissipationReport r = check_dissipation(t, StorageWeight(eye(2)), eye(2));
  EXPECT_TRUE(r.passive);
  for (double m : r.margins) EXPECT_EQ(m, 0.0);
}

TEST(CheckDissipation, GainTwoIsNotPassive) {
  const StandardSystem s{Matrix(0, 0), Matrix(0, 1), Matrix(1, 0), scalar(2.0), {}};
  const Trajectory t = simulate_standard(s, Vector(0), std::vector<Vector>(3, Vector::Ones(1)));
  const DissipationReport r = check_dissipation(t, StorageWeight(Matrix(0, 0)), Matrix(0, 0));
  EXPECT_FALSE(r.passive);
  EXPECT_DOUBLE_EQ(r.min_margin, -3.0);
}

TEST(CheckDissipation, GeneratedSystemsDissipate) {
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 6), m = testing::uniform_int(rng, 1, 6);
    const testing::GeneratedSystem g = testing::random_ph_system(rng, n, m, m, cplx);
    const StorageWeight x(g.witness);
    ASSERT_TRUE(is_scattering_ph(g.sys, x).scattering_ph);
    const Trajectory t = simulate_standard(g.sys, testing::random_vector(rng, n, cplx),
                                           testing::random_inputs(rng, 100, m, cplx));
    EXPECT_GE(check_dissipation(t, x, eye(n)).min_margin, -1e-9);
  }
}

TEST(IsScatteringPh, Examples) {
  const StandardSystem zero{Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(1, 2), scalar(0.0), {}};
  PhReport r = is_scattering_ph(zero, StorageWeight(eye(2)));
  EXPECT_TRUE(r.scattering_ph);
  EXPECT_NEAR(r.lmi_residual, -1.0, 1e-14);

  const StandardSystem gain{scalar(0.0), scalar(0.0), scalar(0.0), scalar(2.0), {}};
  EXPECT_FALSE(is_scattering_ph(gain, StorageWeight(eye(1))).scattering_ph);

  Rng rng(48);
  const Matrix u = testing::random_unitary(rng, 5, true);
  const StandardSystem unitary{u.topLeftCorner(3, 3), u.topRightCorner(3, 2),
                               u.bottomLeftCorner(2, 3), u.bottomRightCorner(2, 2), {}};
  r = is_scattering_ph(unitary, StorageWeight(eye(3)));
  EXPECT_TRUE(r.scattering_ph);
  EXPECT_NEAR(r.lmi_residual, 0.0, 1e-12);
  EXPECT_NEAR(r.weighted_norm, 1.0, 1e-12);
}

TEST(FindStorageWeight, ContractionAccepted) {
  Rng rng(49);
  const Matrix t = testing::random_contraction(rng, 5, 5, false, 0.9);
  const StandardSystem s{t.topLeftCorner(3, 3), t.topRightCorner(3, 2), t.bottomLeftCorner(2, 3),
                         t.bottomRightCorner(2, 2), {}};
  EXPECT_TRUE(is_scattering_ph(s, find_storage_weight(s)).scattering_ph);
}

TEST(FindStorageWeight, UnstableScalarNotFound) {
  const StandardSystem s{scalar(2.0), Matrix(1, 0), Matrix(0, 1), Matrix(0, 0), {}};
  EXPECT_EQ(kind_of([&] { find_storage_weight(s); }), ErrorKind::NotFound);
}

TEST(FindStorageWeight, GeneratedWitnessSystems) {
  Rng rng(50);
  for (int trial = 0; trial < 40; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 5), m = testing::uniform_int(rng, 1, 4);
    const testing::GeneratedSystem g = testing::random_ph_system(rng, n, m, m, cplx);
    const StorageWeight x = find_storage_weight(g.sys);
    EXPECT_TRUE(is_scattering_ph(g.sys, x).scattering_ph);
  }
}

TEST(ConsistencyResidual, ZeroForConsistentPairs) {
  Rng rng(51);
  const DescriptorSystem sys = testing::random_index_one(rng, 2, 2, 1, 1, true);
  const Reduction red = reduce_to_standard(sys);
  const Vector u = testing::random_vector(rng, 1, true);
  const Vector x = red.phi * testing::random_vector(rng, 2, true) + red.psi * u;
  EXPECT_LT(consistency_residual(sys, x, u), 1e-10);
  EXPECT_GT(consistency_residual(sys, x + testing::random_vector(rng, 4, true), u), 1e-6);
}

}  // namespace
}  // namespace dtph
