#pragma once

#include "mads/core.hpp"

#include <Eigen/LU>

#include <cmath>
#include <random>

namespace mads {

/// Isotropic mesh and frame around a center point.
///
/// The mesh is the lattice {center + delta * y : y integer}, the frame is the
/// infinity-norm ball of radius `frame` around the center. `delta` is always
/// min{frame, frame^2}.
template <typename Scalar>
struct MeshState {
  VectorX<Scalar> center;
  Scalar delta{1};
  Scalar frame{1};
  Scalar tau{0.5};
};

using Mesh = MeshState<double>;

template <typename Scalar>
Scalar update_mesh_size(Scalar frame) {
  if (!(frame > Scalar(0)))
    throw Error(ErrorCode::NonPositiveFrame, "frame size must be positive");
  return std::min(frame, frame * frame);
}

template <typename Derived>
MeshState<typename Derived::Scalar> make_mesh(const Eigen::MatrixBase<Derived>& center,
                                              typename Derived::Scalar frame,
                                              typename Derived::Scalar tau) {
  using Scalar = typename Derived::Scalar;
  return MeshState<Scalar>{center, update_mesh_size(frame), frame, tau};
}

template <typename Scalar>
MeshState<Scalar> enlarge(const MeshState<Scalar>& mesh) {
  MeshState<Scalar> out = mesh;
  out.frame = mesh.frame / mesh.tau;
  out.delta = update_mesh_size(out.frame);
  return out;
}

template <typename Scalar>
MeshState<Scalar> refine(const MeshState<Scalar>& mesh) {
  MeshState<Scalar> out = mesh;
  out.frame = mesh.frame * mesh.tau;
  out.delta = update_mesh_size(out.frame);
  return out;
}

/// Nearest mesh point, ties rounded half away from zero.
template <typename Derived>
VectorX<typename Derived::Scalar> project_to_mesh(
    const Eigen::MatrixBase<Derived>& x, const MeshState<typename Derived::Scalar>& mesh) {
  using Scalar = typename Derived::Scalar;
  VectorX<Scalar> steps =
      ((x - mesh.center) / mesh.delta).unaryExpr([](Scalar v) { return std::round(v); });
  return mesh.center + mesh.delta * steps;
}

/// True when x is exactly the lattice point it projects to.
template <typename Derived>
bool is_on_mesh(const Eigen::MatrixBase<Derived>& x,
                const MeshState<typename Derived::Scalar>& mesh) {
  if (x.size() != mesh.center.size()) return false;
  return (project_to_mesh(x, mesh).array() == x.array()).all();
}

/// I - 2 v v^T for a unit vector v.
template <typename Derived>
MatrixX<typename Derived::Scalar> householder(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const auto n = v.size();
  return MatrixX<Scalar>::Identity(n, n) - Scalar(2) * v * v.transpose();
}

/// Integer step count so that delta * steps stays inside the frame.
template <typename Scalar>
Scalar frame_steps(const MeshState<Scalar>& mesh) {
  const Scalar ratio = mesh.frame / mesh.delta;
  return std::max(Scalar(1), std::floor(ratio * (Scalar(1) + Scalar(1e-12))));
}

/// Ortho-2n directions from a given unit seed direction.
///
/// Columns 0..n-1 are the scaled and rounded Householder columns, columns
/// n..2n-1 their negatives. Entries are integers (in units of mesh.delta) and
/// every column has infinity norm frame_steps(mesh). If rounding makes the
/// basis singular the signed coordinate basis is used instead.
template <typename Derived>
MatrixX<typename Derived::Scalar> ortho_2n_from_direction(
    const Eigen::MatrixBase<Derived>& v, const MeshState<typename Derived::Scalar>& mesh) {
  using Scalar = typename Derived::Scalar;
  const auto n = v.size();
  const Scalar steps = frame_steps(mesh);
  const MatrixX<Scalar> h = householder(v);

  MatrixX<Scalar> basis(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Scalar norm = h.col(j).cwiseAbs().maxCoeff();
    basis.col(j) = (h.col(j) * (steps / norm)).unaryExpr([](Scalar s) { return std::round(s); });
  }
  Eigen::FullPivLU<MatrixX<Scalar>> lu(basis);
  if (lu.rank() < n) basis = steps * MatrixX<Scalar>::Identity(n, n);

  MatrixX<Scalar> dirs(n, 2 * n);
  dirs << basis, -basis;
  return dirs;
}

/// Unit direction drawn uniformly on the sphere.
template <typename Scalar, typename Rng>
VectorX<Scalar> random_unit_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  VectorX<Scalar> v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() == Scalar(0));
  return v / v.norm();
}

template <typename Scalar, typename Rng>
MatrixX<Scalar> ortho_2n_directions(Eigen::Index n, Rng& rng, const MeshState<Scalar>& mesh) {
  const VectorX<Scalar> v = random_unit_vector<Scalar>(n, rng);
  return ortho_2n_from_direction(v, mesh);
}

}  // namespace mads
