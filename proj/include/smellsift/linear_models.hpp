#pragma once

// Expression-friendly helpers shared by the linear learners. Everything is
// templated on the Eigen expression type so the same code serves double
// matrices and test-side finite-difference probes.

#include <cmath>
#include <utility>

#include <Eigen/Core>

namespace smellsift::linear {

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
  const Scalar e = std::exp(z);
  return e / (Scalar(1) + e);
}

/// log(1 + exp(z)) without overflow.
template <typename Scalar>
Scalar softplus(Scalar z) {
  return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// Column means and population standard deviations; zero spread maps to 1
/// so constant columns standardize to 0.
template <typename Derived>
std::pair<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>,
          Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>
column_moments(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar n = static_cast<Scalar>(x.rows());
  Vector mean = x.colwise().mean().transpose();
  Vector scale = ((x.rowwise() - mean.transpose()).array().square().colwise().sum() / n).sqrt().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    if (!(scale(j) > Scalar(1e-12))) scale(j) = Scalar(1);
  return {mean, scale};
}

template <typename DerivedX, typename DerivedM, typename DerivedS>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, Eigen::Dynamic>
standardize(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedM>& mean,
            const Eigen::MatrixBase<DerivedS>& scale) {
  return (x.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

/// Mean log-loss plus (l2/2)·|w|² for labels y ∈ {0,1}.
template <typename DerivedX, typename DerivedY, typename DerivedW>
typename DerivedX::Scalar logistic_loss(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                                        const Eigen::MatrixBase<DerivedW>& w, typename DerivedX::Scalar bias,
                                        typename DerivedX::Scalar l2) {
  using Scalar = typename DerivedX::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z = (x * w).array() + bias;
  Scalar total = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(z(i)) - y(i) * z(i);
  return total / static_cast<Scalar>(x.rows()) + Scalar(0.5) * l2 * w.squaredNorm();
}

/// Analytic gradient of logistic_loss: (∂/∂w, ∂/∂bias).
template <typename DerivedX, typename DerivedY, typename DerivedW>
std::pair<Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1>, typename DerivedX::Scalar>
logistic_gradient(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                  const Eigen::MatrixBase<DerivedW>& w, typename DerivedX::Scalar bias, typename DerivedX::Scalar l2) {
  using Scalar = typename DerivedX::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> residual = (x * w).array() + bias;
  for (Eigen::Index i = 0; i < residual.size(); ++i) residual(i) = sigmoid(residual(i)) - y(i);
  const Scalar n = static_cast<Scalar>(x.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grad_w = x.transpose() * residual / n + l2 * w;
  return {grad_w, residual.sum() / n};
}

} // namespace smellsift::linear
