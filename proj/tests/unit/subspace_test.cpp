#include <gtest/gtest.h>

#include "generators.hpp"

namespace dtph {
namespace {

using testing::Rng;

Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

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

// Pointwise check ||Q z|| <= ||P z|| on random generator coefficients.
bool sampled_contractive(const Subspace& m, Rng& rng, int samples) {
  for (int s = 0; s < samples; ++s) {
    const Vector z = testing::random_vector(rng, m.dim(), true);
    const double pz = (m.first() * z).norm(), qz = (m.second() * z).norm();
    if (qz > pz + 1e-9 * pz) return false;
  }
  return true;
}

TEST(FromImage, IdentityGraph) {
  const Subspace s = Subspace::from_image(eye(2), eye(2));
  EXPECT_EQ(s.dim(), 2);
  EXPECT_TRUE(same_set(s, Subspace::graph(eye(2))));
}

TEST(FromImage, ZeroSecondComponent) {
  const Subspace s = Subspace::from_image(eye(2), Matrix::Zero(2, 2));
  EXPECT_EQ(s.dim(), 2);
  EXPECT_LT(s.second().norm(), 1e-15);
}

TEST(FromImage, RedundantGeneratorsCollapse) {
  Matrix p(2, 2), q(2, 2);
  p << 1, 3, 0, 0;
  q << 0, 0, 1, 3;
  const Subspace s = Subspace::from_image(p, q);
  EXPECT_EQ(s.dim(), 1);
  const Matrix st = s.stacked();
  EXPECT_LT((st.adjoint() * st - eye(1)).norm(), 1e-14);
}

TEST(FromImage, MismatchedColumnsThrow) {
  EXPECT_EQ(kind_of([] { Subspace::from_image(eye(2), Matrix::Zero(2, 3)); }),
            ErrorKind::DimensionMismatch);
}

TEST(Kernel, IdentityGraphIsIMinusI) {
  const KernelRep k = to_kernel(Subspace::graph(eye(2)));
  ASSERT_EQ(k.k1.rows(), 2);
  EXPECT_LT((k.k1 + k.k2).norm(), 1e-14);
  EXPECT_EQ(rank_and_bases(k.k1).rank, 2);
}

TEST(Kernel, FullSpaceHasNoRows) {
  const Subspace full = Subspace::from_image(Matrix::Identity(1, 2), Matrix::Identity(2, 2).bottomRows(1));
  EXPECT_EQ(full.dim(), 2);
  EXPECT_EQ(to_kernel(full).k1.rows(), 0);
}

TEST(Kernel, RoundTripPreservesTheSet) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Subspace s = testing::random_subspace(rng, 3, 3, cplx);
    const KernelRep k = to_kernel(s);
    EXPECT_LT((k.k1 * s.first() + k.k2 * s.second()).norm(), 1e-12);
    EXPECT_TRUE(same_set(Subspace::from_kernel(k.k1, k.k2), s));
  }
}

TEST(Contains, Examples) {
  Rng rng(22);
  const Subspace id = Subspace::graph(eye(3));
  const Vector x = testing::random_vector(rng, 3, true);
  EXPECT_TRUE(contains(id, x, x));
  EXPECT_FALSE(contains(id, x, 2.0 * x));
  const Subspace any = testing::random_subspace(rng, 3, 2, true);
  EXPECT_TRUE(contains(any, Vector::Zero(3), Vector::Zero(3)));
}

TEST(Classify, IdentityGraph) {
  const ClassificationReport r = classify(Subspace::graph(eye(3)));
  EXPECT_TRUE(r.norm_preserving);
  EXPECT_TRUE(r.contractive);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.lagrangian);
  EXPECT_FALSE(r.dirac);
  EXPECT_EQ(r.dim, 3);
  EXPECT_TRUE(r.maximal_contractive);
  EXPECT_TRUE(r.maximal_monotone);
  EXPECT_TRUE(r.maximal_norm_preserving);
}

TEST(Classify, ScalarExpansionHasWitness) {
  const Subspace s = Subspace::from_image(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 2.0));
  const ClassificationReport r = classify(s);
  EXPECT_FALSE(r.contractive);
  ASSERT_TRUE(r.contractive_witness.has_value());
  const Vector& z = *r.contractive_witness;
  EXPECT_GT((s.second() * z).norm(), (s.first() * z).norm());
}

TEST(Classify, SkewGraphIsDiracNotLagrangian) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix w = testing::random_skew(rng, 3, trial % 2);
    const Subspace s = Subspace::graph(w);
    const ClassificationReport r = classify(s);
    EXPECT_TRUE(r.dirac);
    EXPECT_TRUE(r.monotone);
    EXPECT_FALSE(r.lagrangian);
    // Brute force: <v, w> + <w, v> = 0 for members.
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Vector v = testing::random_vector(rng, 3, true);
      const Vector wv = w * v;
      worst = std::max(worst, std::abs(2.0 * v.dot(wv).real()) / v.squaredNorm());
    }
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(Classify, MonotoneGraph) {
  Rng rng(24);
  const ClassificationReport r = classify(Subspace::graph(testing::random_monotone(rng, 4, true)));
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.maximal_monotone);
}

TEST(Classify, RequiresSquareRelation) {
  const Subspace s = Subspace::from_image(Matrix::Identity(2, 1), Matrix::Identity(3, 1));
  EXPECT_EQ(kind_of([&] { classify(s); }), ErrorKind::DimensionMismatch);
}

TEST(Classify, PointwiseSoundness) {
  Rng rng(25);
  for (int trial = 0; trial < 60; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 5);
    const double top = trial % 3 == 0 ? 1.6 : 0.95;
    const Subspace s = Subspace::graph(testing::random_with_singular_values(rng, n, n, 0.0, top, cplx));
    const ClassificationReport r = classify(s);
    if (r.contractive) {
      EXPECT_TRUE(sampled_contractive(s, rng, 1000));
    } else {
      ASSERT_TRUE(r.contractive_witness.has_value());
      const Vector& z = *r.contractive_witness;
      EXPECT_GT((s.second() * z).norm(), (s.first() * z).norm());
    }
  }
}

TEST(Classify, FlagImplications) {
  Rng rng(26);
  for (int trial = 0; trial < 200; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 4);
    Subspace s = testing::random_subspace(rng, n, testing::uniform_int(rng, 0, 2 * n), cplx);
    switch (trial % 4) {
      case 1: s = Subspace::graph(testing::random_skew(rng, n, cplx)); break;
      case 2: s = Subspace::graph(testing::random_unitary(rng, n, cplx)); break;
      case 3: s = Subspace::graph(testing::random_monotone(rng, n, cplx)); break;
      default: break;
    }
    const ClassificationReport r = classify(s);
    EXPECT_TRUE(!r.dirac || r.monotone);
    EXPECT_TRUE(!r.norm_preserving || r.contractive);
    EXPECT_TRUE(!r.maximal_norm_preserving || r.norm_preserving);
    EXPECT_TRUE(!r.maximal_contractive || r.contractive);
    EXPECT_TRUE(!r.maximal_monotone || r.monotone);
  }
}

TEST(Classify, MaximalNormPreservingIsAGraph) {
  Rng rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = testing::uniform_int(rng, 1, 5);
    const Matrix u = testing::random_unitary(rng, n, trial % 2);
    // Generators mixed by a random invertible change of coefficients.
    const Matrix g = testing::random_matrix(rng, n, n, true);
    const Subspace s = Subspace::from_image(g, u * g);
    const ClassificationReport r = classify(s);
    ASSERT_TRUE(r.maximal_norm_preserving);
    EXPECT_LT((as_graph(s) - u).norm(), 1e-10);
  }
}

TEST(Cayley, IdentityGraphMapsToZeroSecondComponent) {
  const Subspace c = cayley(Subspace::graph(eye(2)), 1.0, 1.0);
  EXPECT_TRUE(same_set(c, Subspace::from_image(2.0 * eye(2), Matrix::Zero(2, 2))));
}

TEST(Cayley, SkewGraphMatchesMatrixCayley) {
  Rng rng(28);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = testing::uniform_int(rng, 1, 5);
    const Matrix w = testing::random_skew(rng, n, trial % 2);
    const Matrix oracle = (eye(n) - w) * (eye(n) + w).inverse();
    const Subspace c = cayley(Subspace::graph(w), 1.0, 1.0);
    EXPECT_TRUE(same_set(c, Subspace::graph(oracle)));
    EXPECT_TRUE(classify(c).norm_preserving);
  }
}

TEST(Cayley, MonotoneMapsToContractive) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 6);
    const Subspace m = Subspace::graph(testing::random_monotone(rng, n, cplx));
    const double phase = cplx ? testing::uniform(rng, 0.0, 6.28) : 0.0;
    const Complex unit = std::polar(1.0, phase);
    const Complex alpha = testing::uniform(rng, 0.2, 3.0) * unit;
    const Complex beta = testing::uniform(rng, 0.2, 3.0) * unit;
    const Subspace c = cayley(m, alpha, beta);
    const ClassificationReport r = classify(c);
    EXPECT_TRUE(r.contractive);
    EXPECT_TRUE(r.maximal_contractive);
    EXPECT_EQ(c.dim(), m.dim());
  }
}

TEST(Cayley, ContractiveMapsToMonotone) {
  Rng rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 6);
    const Subspace m = Subspace::graph(testing::random_contraction(rng, n, n, cplx, 1.0));
    const Complex unit = std::polar(1.0, cplx ? testing::uniform(rng, 0.0, 6.28) : 0.0);
    const double b = testing::uniform(rng, 0.2, 3.0);
    const Complex alpha = testing::uniform(rng, 0.05, 1.0) * b * unit;
    const Complex beta = b * unit;
    const ClassificationReport r = classify(cayley(m, alpha, beta));
    EXPECT_TRUE(r.monotone);
    EXPECT_TRUE(r.maximal_monotone);
  }
}

TEST(Cayley, MembershipUnderForwardMap) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 5);
    const Subspace m = testing::random_subspace(rng, n, testing::uniform_int(rng, 0, 2 * n), cplx);
    const Complex alpha(testing::uniform(rng, 0.3, 2.0), cplx ? testing::uniform(rng, -1, 1) : 0.0);
    const Complex beta(testing::uniform(rng, 0.3, 2.0), cplx ? testing::uniform(rng, -1, 1) : 0.0);
    const Subspace c = cayley(m, alpha, beta);
    EXPECT_EQ(c.dim(), m.dim());
    for (Eigen::Index j = 0; j < c.dim(); ++j) {
      const Vector v = c.first().col(j), w = c.second().col(j);
      EXPECT_TRUE(contains(m, alpha * (v + w), beta * (v - w)));
    }
  }
}

TEST(Cayley, ZeroParameterRejected) {
  EXPECT_EQ(kind_of([] { cayley(Subspace::graph(eye(2)), 0.0, 1.0); }), ErrorKind::ZeroParameter);
  EXPECT_EQ(kind_of([] { cayley_inverse(Subspace::graph(eye(2)), 1.0, 0.0); }),
            ErrorKind::ZeroParameter);
}

TEST(CayleyInverse, Examples) {
  const Subspace id = Subspace::graph(eye(3));
  EXPECT_TRUE(same_set(cayley_inverse(cayley(id, 1.0, 1.0), 1.0, 1.0), id));
  const Subspace flat = Subspace::from_image(eye(3), Matrix::Zero(3, 3));
  EXPECT_TRUE(same_set(cayley_inverse(flat, 1.0, 1.0), id));
}

TEST(CayleyInverse, RoundTripOnRandomSubspaces) {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 6);
    const Subspace m = testing::random_subspace(rng, n, testing::uniform_int(rng, 0, 2 * n), cplx);
    const Complex alpha(testing::uniform(rng, 0.3, 2.0), cplx ? testing::uniform(rng, -1, 1) : 0.0);
    const Complex beta(testing::uniform(rng, 0.3, 2.0), cplx ? testing::uniform(rng, -1, 1) : 0.0);
    EXPECT_TRUE(same_set(cayley_inverse(cayley(m, alpha, beta), alpha, beta), m));
  }
}

TEST(Compose, IdentityArguments) {
  Rng rng(33);
  const Subspace m = testing::random_subspace(rng, 3, 3, true);
  const Subspace id = Subspace::graph(eye(3));
  EXPECT_TRUE(same_set(compose(m, id), flip(m)));
  // (w, v) in id forces v = w, leaving {(z, w) : (z, w) in L} = L itself.
  EXPECT_TRUE(same_set(compose(id, m), m));
}

TEST(Compose, GraphsAgreeWithPointwiseOracle) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const bool cplx = trial % 2 == 0;
    const Eigen::Index n = testing::uniform_int(rng, 1, 5);
    const Matrix a = testing::random_with_singular_values(rng, n, n, 0.5, 2.0, cplx);
    const Matrix b = testing::random_matrix(rng, n, n, cplx);
    const Subspace c = compose(Subspace::graph(a), Subspace::graph(b));
    EXPECT_EQ(c.dim(), n);
    // (w, A w) in M and (z, B z) in L share v = A w = B z.
    const Matrix ainv = a.inverse();
    for (int k = 0; k < 1000; ++k) {
      const Vector z = testing::random_vector(rng, n, cplx);
      ASSERT_TRUE(contains(c, z, ainv * b * z));
    }
  }
}

TEST(AsGraph, Examples) {
  EXPECT_LT((as_graph(Subspace::graph(eye(3))) - eye(3)).norm(), 1e-14);
  EXPECT_LT(as_graph(Subspace::from_image(eye(2), Matrix::Zero(2, 2))).norm(), 1e-15);
  EXPECT_EQ(kind_of([] { as_graph(Subspace::from_image(Matrix::Zero(2, 2), eye(2))); }),
            ErrorKind::NotAGraph);
}

}  // namespace
}  // namespace dtph
