#pragma once

#include <string>
#include <vector>

#include "dtph/subspace.hpp"
#include "dtph/systems.hpp"

namespace dtph {

/// Geometric discrete-time pH system (N, Cres).
///
/// Members of N are pairs ((x_{k+1}, f_R, y_k), (x_k, e_R, u_k)) in
/// K^{n+r+m} x K^{n+r+m}; members of Cres are (f_R, e_R) in K^r x K^r.
struct GeometricPH {
  Eigen::Index n = 0;
  Eigen::Index r = 0;
  Eigen::Index m = 0;
  Subspace N;
  Subspace C;

  /// N = {(U s, s)}: (x+, f, y) = U (x, e, u).
  static GeometricPH from_map(Eigen::Index n, Eigen::Index r, Eigen::Index m, const Matrix& u,
                              const Subspace& resistive, const Tolerances& tol = {});
};

struct GeometricValidation {
  bool valid = false;
  ClassificationReport n_report;
  ClassificationReport c_report;
  std::vector<std::string> violations;
};

/// Checks that N is maximal norm preserving and Cres maximal contractive.
/// Reports violations instead of throwing.
GeometricValidation validate(const GeometricPH& g, const Tolerances& tol = {});

struct GeoStepResult {
  Vector x_next;
  Vector y;
  Vector f;
  Vector e;
  double power_residual = 0.0;
};

/// Solves the (n+r+m) + r square system formed by the kernel rows of N and
/// Cres. Throws NonUniqueStep / InconsistentStep.
GeoStepResult step(const GeometricPH& g, const Vector& x, const Vector& u,
                   const Tolerances& tol = {});

struct GeoTrajectory {
  Trajectory traj;
  std::vector<Vector> f;
  std::vector<Vector> e;
  std::vector<double> power_residuals;
  std::vector<double> margins;  // |u|^2 - |y|^2 - (|x_{k+1}|^2 - |x_k|^2)
  double min_margin = 0.0;
  double max_power_residual = 0.0;
};

GeoTrajectory simulate(const GeometricPH& g, const Vector& x0, const std::vector<Vector>& inputs,
                       const Tolerances& tol = {});

/// Realizes a scattering-pH standard system through the unitary dilation of
/// T = diag(X^1/2, I) [A B; C D] diag(X^-1/2, I). The geometric state is
/// xi = X^1/2 x, r = n + m, and Cres is the zero graph (e_R = 0).
/// Throws NotScatteringPH when (sys, X) fails the LMI.
GeometricPH dilate(const StandardSystem& sys, const StorageWeight& weight,
                   const Tolerances& tol = {});

/// Halmos dilation [[T, (I - T T^H)^1/2], [(I - T^H T)^1/2, -T^H]] of a contraction.
Matrix halmos_dilation(const Matrix& t);

struct Discretization {
  Subspace relation;
  ClassificationReport report;
};

/// cayley(compose(M, L), h/2, 1), the trapezoidal discretization of
/// (z, -dz/dt) in M^{-1} L. Omitting L means the identity graph, in which case
/// a non-contractive result throws NotContractive.
Discretization discretize_dh(const Subspace& m, const Subspace* l, double h,
                             const Tolerances& tol = {});

/// z_{k+1} from (z_k, z_{k+1}) in S; NotAGraph if S is not a graph.
Vector step_relation(const Subspace& s, const Vector& z, const Tolerances& tol = {});

}  // namespace dtph
