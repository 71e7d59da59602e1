#include "mads/quad_model.hpp"

#include <Eigen/Cholesky>

namespace mads {

double QuadraticModel::operator()(const Point& x) const {
  const VectorX<double> y = (x - center) / scale;
  return c0 + g.dot(y) + 0.5 * y.dot(hessian * y);
}

std::optional<Point> QuadraticModel::minimizer() const {
  Eigen::LLT<MatrixX<double>> llt(hessian);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const VectorX<double> y = llt.solve(-g);
  if (!y.allFinite()) return std::nullopt;
  return Point(center + scale * y);
}

namespace {

VectorX<double> basis_row(const VectorX<double>& y, ModelBasis basis) {
  const auto n = y.size();
  const auto size = basis == ModelBasis::Full ? quadratic_basis_size(static_cast<int>(n))
                                              : static_cast<int>(1 + 2 * n);
  VectorX<double> row(size);
  Eigen::Index k = 0;
  row[k++] = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) row[k++] = y[i];
  for (Eigen::Index i = 0; i < n; ++i) row[k++] = 0.5 * y[i] * y[i];
  if (basis == ModelBasis::Full)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) row[k++] = y[i] * y[j];
  return row;
}

}  // namespace

std::optional<QuadraticModel> fit_quadratic_model(std::span<const Point> points,
                                                  std::span<const double> values,
                                                  const Point& center, double scale,
                                                  ModelBasis basis, double ridge) {
  if (points.empty() || points.size() != values.size() || !(scale > 0.0)) return std::nullopt;
  const auto n = center.size();
  const auto rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = basis_row(VectorX<double>::Zero(n), basis).size();

  MatrixX<double> a(rows, cols);
  VectorX<double> b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    a.row(r) = basis_row((points[static_cast<std::size_t>(r)] - center) / scale, basis);
    b[r] = values[static_cast<std::size_t>(r)];
  }
  MatrixX<double> normal = a.transpose() * a;
  normal.diagonal().array() += ridge;
  const VectorX<double> coef = normal.ldlt().solve(a.transpose() * b);
  if (!coef.allFinite()) return std::nullopt;

  QuadraticModel model;
  model.center = center;
  model.scale = scale;
  model.c0 = coef[0];
  model.g = coef.segment(1, n);
  model.hessian = MatrixX<double>::Zero(n, n);
  model.hessian.diagonal() = coef.segment(1 + n, n);
  if (basis == ModelBasis::Full) {
    Eigen::Index k = 1 + 2 * n;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        model.hessian(i, j) = coef[k];
        model.hessian(j, i) = coef[k];
        ++k;
      }
  }
  return model;
}

}  // namespace mads
