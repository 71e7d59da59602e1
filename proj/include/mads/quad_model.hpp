#pragma once

#include "mads/core.hpp"

#include <optional>
#include <span>

namespace mads {

/// m(x) = c0 + g.y + 0.5 y'Hy with y = (x - center) / scale.
struct QuadraticModel {
  Point center;
  double scale = 1.0;
  double c0 = 0.0;
  VectorX<double> g;
  MatrixX<double> hessian;

  double operator()(const Point& x) const;
  /// Stationary point of the model in x space, when H is positive definite.
  std::optional<Point> minimizer() const;
};

/// Number of coefficients of a full quadratic in n variables.
constexpr int quadratic_basis_size(int n) { return (n + 1) * (n + 2) / 2; }

enum class ModelBasis { Full, Diagonal };

/// Least-squares fit with ridge damping on the normal equations. Empty when
/// the fit is not finite.
std::optional<QuadraticModel> fit_quadratic_model(std::span<const Point> points,
                                                  std::span<const double> values,
                                                  const Point& center, double scale,
                                                  ModelBasis basis, double ridge = 1e-10);

}  // namespace mads
