#pragma once

#include <optional>
#include <vector>

#include "dtph/linalg.hpp"

namespace dtph {

/// Block split of (B, C, D) into coupled (superscript 1) and external
/// (superscript 2) ports. The first `coupled` inputs and outputs are coupled.
struct PortBlocks {
  Matrix b1, b2;
  Matrix c1, c2;
  Matrix d11, d12, d21, d22;
};

PortBlocks split_ports(const Matrix& b, const Matrix& c, const Matrix& d, Eigen::Index coupled);

/// x_{k+1} = A x_k + B u_k,  y_k = C x_k + D u_k
struct StandardSystem {
  Matrix a, b, c, d;
  std::optional<Eigen::Index> coupled;  // port partition m1, if any

  Eigen::Index states() const { return a.rows(); }
  Eigen::Index inputs() const { return b.cols(); }
  Eigen::Index outputs() const { return c.rows(); }

  /// Throws DimensionMismatch / InvalidArgument.
  void validate() const;
  PortBlocks ports() const;
  /// [A B; C D]
  Matrix system_matrix() const;
};

/// E x_{k+1} = A x_k + B u_k,  y_k = C x_k + D u_k, E possibly singular.
struct DescriptorSystem {
  Matrix e, a, b, c, d;
  std::optional<Eigen::Index> coupled;

  static DescriptorSystem from_standard(const StandardSystem& sys);

  Eigen::Index states() const { return a.rows(); }
  Eigen::Index inputs() const { return b.cols(); }
  Eigen::Index outputs() const { return c.rows(); }

  void validate() const;
  PortBlocks ports() const;
  bool has_identity_e() const;
};

/// Hermitian positive definite weight X of the Hamiltonian H(x) = x^H X x / 2.
class StorageWeight {
 public:
  /// Throws DimensionMismatch (non-square), InvalidArgument (not Hermitian)
  /// or NotPositiveDefinite.
  explicit StorageWeight(const Matrix& x, const Tolerances& tol = {});

  const Matrix& matrix() const { return x_; }
  Eigen::Index size() const { return x_.rows(); }
  double hamiltonian(const Vector& state) const;

 private:
  Matrix x_;
};

struct Trajectory {
  std::vector<Vector> states;   // N + 1
  std::vector<Vector> inputs;   // N
  std::vector<Vector> outputs;  // N
  std::vector<double> residuals;

  std::size_t steps() const { return inputs.size(); }
};

struct IndexReport {
  bool index_le_one = false;
  Eigen::Index n = 0;
  Eigen::Index rank_e = 0;
  Eigen::Index rank_augmented = 0;  // rank [E, A K_E]
};

/// Kronecker index of (E, A) at most one. Throws SingularPencil when no
/// probe lambda makes lambda E - A nonsingular.
IndexReport index_le_one(const Matrix& e, const Matrix& a, const Tolerances& tol = {});

/// Causal reduction of an index-1 descriptor system.
///
/// The full state is recovered as x = phi * xr + psi * u and the reduced
/// state as xr = project * x.
struct Reduction {
  StandardSystem reduced;
  Matrix phi;
  Matrix psi;
  Matrix project;
};

Reduction reduce_to_standard(const DescriptorSystem& sys, const Tolerances& tol = {});

/// Residual of the algebraic equations Z^H (A x + B u) = 0, Z spanning the
/// left kernel of E. Zero for every consistent (x, u).
double consistency_residual(const DescriptorSystem& sys, const Vector& x, const Vector& u,
                            const Tolerances& tol = {});

Trajectory simulate_standard(const StandardSystem& sys, const Vector& x0,
                             const std::vector<Vector>& inputs);

/// Steps E x_{k+1} = A x_k + B u_k together with the algebraic constraints
/// at k + 1. The last state is completed with u_N = 0.
Trajectory simulate_descriptor(const DescriptorSystem& sys, const Vector& x0,
                               const std::vector<Vector>& inputs, const Tolerances& tol = {});

struct DissipationReport {
  std::vector<double> margins;
  double min_margin = 0.0;
  bool passive = true;
};

/// margin_k = (|u_k|^2 - |y_k|^2) - (V(E x_{k+1}) - V(E x_k)) with
/// V(xi) = xi^H X xi. `weight` only needs to be Hermitian.
DissipationReport check_dissipation(const Trajectory& traj, const Matrix& weight, const Matrix& e,
                                    const Tolerances& tol = {});
DissipationReport check_dissipation(const Trajectory& traj, const StorageWeight& weight,
                                    const Matrix& e, const Tolerances& tol = {});

struct PhReport {
  bool scattering_ph = false;
  double lmi_residual = 0.0;   // lambda_max(M^H diag(X, I) M - diag(X, I))
  double weighted_norm = 0.0;  // || diag(X^1/2, I) M diag(X^-1/2, I) ||_2
};

PhReport is_scattering_ph(const StandardSystem& sys, const StorageWeight& weight,
                          const Tolerances& tol = {});

struct WeightSearchOptions {
  int max_iters = 20000;
  double convergence_rtol = 1e-13;
};

/// Searches an X passing is_scattering_ph by bounded-real Riccati iteration.
/// Throws NotFound with the reason when no X is verified.
StorageWeight find_storage_weight(const StandardSystem& sys, const Tolerances& tol = {},
                                  const WeightSearchOptions& options = {});

}  // namespace dtph
