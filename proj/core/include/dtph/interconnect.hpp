#pragma once

#include <string>
#include <vector>

#include "dtph/subspace.hpp"
#include "dtph/systems.hpp"

namespace dtph {

enum class CouplingMode { General, Redheffer, Feedback };

/// Kernel form of a coupling relation on (u1^1, u2^1, y1^1, y2^1):
/// m11 u1^1 + m12 u2^1 + m21 y1^1 + m22 y2^1 = 0.
struct CouplingRelation {
  Matrix m11, m12, m21, m22;

  /// u1^1 = y2^1 and u2^1 = y1^1 for ports of equal width.
  static CouplingRelation redheffer(Eigen::Index width);
  /// (u1^1, u2^1) = K (y1^1, y2^1).
  static CouplingRelation gain(const Matrix& k, Eigen::Index width1);

  Eigen::Index width1() const { return m11.cols(); }
  Eigen::Index width2() const { return m12.cols(); }

  /// {(y, u)} in K^{a1+a2} x K^{a1+a2}: the map from the coupled outputs back
  /// into the coupled inputs, contractive when ||u|| <= ||y||.
  Subspace relation(const Tolerances& tol = {}) const;
};

/// Throws PortMismatch on malformed blocks and NonContractiveCoupling when the
/// relation is not maximal contractive. Returns the certificate.
ClassificationReport certify_coupling(const CouplingRelation& coupling,
                                      const Tolerances& tol = {});

struct Block {
  std::string name;
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
};

/// Interconnected descriptor system with extended state
/// (x1, x2, u1^1, u2^1, y1^1, y2^1), inputs (u1^2, u2^2), outputs (y1^2, y2^2).
struct ComposedDescriptor {
  DescriptorSystem system;
  std::vector<Block> state_blocks;
  std::vector<Block> input_blocks;
  std::vector<Block> output_blocks;

  /// Completes (x1, x2) with the coupled port values at k = 0.
  Vector initial_state(const Vector& x1, const Vector& x2, const Vector& external_input,
                       const Tolerances& tol = {}) const;
};

ComposedDescriptor general_interconnect(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                                        const CouplingRelation& coupling,
                                        const Tolerances& tol = {});

struct InvertibilityReport {
  bool i_minus_d1d2 = false;
  bool i_minus_d2d1 = false;
  bool kernel_trivial = false;  // ker [[D1, -I], [-I, D2]] = {0}
  double sigma_min_d1d2 = 0.0;
  double sigma_min_d2d1 = 0.0;
  double sigma_min_block = 0.0;

  bool invertible() const { return kernel_trivial; }
  bool consistent() const {
    return i_minus_d1d2 == i_minus_d2d1 && i_minus_d2d1 == kernel_trivial;
  }
};

InvertibilityReport coupling_invertibility(const Matrix& d1, const Matrix& d2,
                                           const Tolerances& tol = {});

struct RedhefferResult {
  StandardSystem reduced;
  InvertibilityReport invertibility;
};

/// Eliminates (u1^1, u2^1) under u1^1 = y2^1, u2^1 = y1^1. Throws
/// CouplingSingular when [[D1^11, -I], [-I, D2^11]] is singular.
RedhefferResult redheffer_reduce(const StandardSystem& sys1, const StandardSystem& sys2,
                                 const Tolerances& tol = {});
/// As above; NotIdentityE unless E1 = E2 = I.
RedhefferResult redheffer_reduce(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                                 const Tolerances& tol = {});

/// Ahat of the full-port feedback u1 = y2, u2 = y1. Throws FeedbackSingular.
Matrix closed_loop_matrix(const StandardSystem& sys1, const StandardSystem& sys2,
                          const Tolerances& tol = {});

struct ClosedLoopReport {
  Matrix ahat;
  double lmi_max_eig = 0.0;    // lambda_max(Ahat^H Xh Ahat - Xh)
  double weighted_norm = 0.0;  // || Xh^1/2 Ahat Xh^-1/2 ||_2
  bool contractive = false;
  double literal_norm = 0.0;   // || Xh Ahat Xh^-1 ||_2, i.e. ||Xh Ahat z|| <= ||Xh z||
  bool literal_contractive = false;
};

ClosedLoopReport closed_loop(const StandardSystem& sys1, const StandardSystem& sys2,
                             const StorageWeight& x1, const StorageWeight& x2,
                             const Tolerances& tol = {});

/// Reference behavior: at every step solves the stacked coupled equations in
/// (x1+, x2+, u1^1, u2^1, y1^1, y2^1) without any closed-form reduction.
/// `inputs` are the stacked external inputs (u1^2, u2^2).
Trajectory elimination_oracle(const DescriptorSystem& sys1, const DescriptorSystem& sys2,
                              const CouplingRelation& coupling, const std::vector<Vector>& inputs,
                              const Vector& x1, const Vector& x2, const Tolerances& tol = {});

StorageWeight compose_storage(const StorageWeight& x1, const StorageWeight& x2,
                              const Tolerances& tol = {});

}  // namespace dtph
