#pragma once

#include <optional>

#include "dtph/linalg.hpp"

namespace dtph {

/// Kernel form {(v, w) : K1 v + K2 w = 0} of a linear relation.
struct KernelRep {
  Matrix k1;  // k x p
  Matrix k2;  // k x q
};

/// A linear relation M in K^p x K^q, stored by orthonormal generators.
///
/// (v, w) is in M iff v = P z and w = Q z for some z. The stacked matrix
/// [P; Q] always has orthonormal columns, so d = dim(M) and all Gram
/// conditions below are d x d forms.
class Subspace {
 public:
  /// Canonicalizes the column span of [P; Q]. Throws DimensionMismatch when
  /// P and Q have different column counts.
  static Subspace from_image(const Matrix& p, const Matrix& q, const Tolerances& tol = {});
  static Subspace from_kernel(const Matrix& k1, const Matrix& k2, const Tolerances& tol = {});

  /// {(v, T v)}
  static Subspace graph(const Matrix& t, const Tolerances& tol = {});

  Eigen::Index p() const { return first_.rows(); }
  Eigen::Index q() const { return second_.rows(); }
  Eigen::Index dim() const { return first_.cols(); }

  const Matrix& first() const { return first_; }
  const Matrix& second() const { return second_; }
  Matrix stacked() const;

  bool is_real() const;

 private:
  Subspace(Matrix p, Matrix q) : first_(std::move(p)), second_(std::move(q)) {}

  Matrix first_;
  Matrix second_;
};

KernelRep to_kernel(const Subspace& m, const Tolerances& tol = {});

/// Distance from (v, w) to M is at most residual_rtol * ||(v, w)||.
bool contains(const Subspace& m, const Vector& v, const Vector& w, const Tolerances& tol = {});

/// Set equality by mutual containment of generators.
bool same_set(const Subspace& a, const Subspace& b, const Tolerances& tol = {});

/// Swaps the two components: {(w, v) : (v, w) in M}.
Subspace flip(const Subspace& m, const Tolerances& tol = {});

struct ClassificationReport {
  Eigen::Index dim = 0;
  Eigen::Index n = 0;

  bool contractive = false;
  bool monotone = false;
  bool norm_preserving = false;
  bool dirac = false;
  bool lagrangian = false;

  bool maximal_contractive = false;
  bool maximal_monotone = false;
  bool maximal_norm_preserving = false;

  // Extreme eigenvalues of the defining Gram forms.
  double contractive_min_eig = 0.0;  // of P^H P - Q^H Q
  double monotone_min_eig = 0.0;     // of Q^H P + P^H Q
  double norm_defect = 0.0;          // max |eig| of Q^H Q - P^H P
  double dirac_defect = 0.0;         // max |eig| of Q^H P + P^H Q
  double lagrangian_defect = 0.0;    // max |eig| of i (Q^H P - P^H Q)

  // Generator coefficients z violating a failed property.
  std::optional<Vector> contractive_witness;
  std::optional<Vector> monotone_witness;
  std::optional<Vector> norm_preserving_witness;
  std::optional<Vector> dirac_witness;
  std::optional<Vector> lagrangian_witness;
};

/// Requires p == q; DimensionMismatch otherwise.
ClassificationReport classify(const Subspace& m, const Tolerances& tol = {});

/// {(v, w) : (alpha (v + w), beta (v - w)) in M} = im[beta P + alpha Q; beta P - alpha Q].
Subspace cayley(const Subspace& m, Complex alpha, Complex beta, const Tolerances& tol = {});

/// Exact inverse of `cayley` for the same parameters.
Subspace cayley_inverse(const Subspace& m, Complex alpha, Complex beta,
                        const Tolerances& tol = {});

/// M^{-1} L = {(z, w) : exists v with (w, v) in M and (z, v) in L}.
Subspace compose(const Subspace& m, const Subspace& l, const Tolerances& tol = {});

/// T with M = {(v, T v)}; NotAGraph when M is not the graph of a map on K^p.
Matrix as_graph(const Subspace& m, const Tolerances& tol = {});

}  // namespace dtph
