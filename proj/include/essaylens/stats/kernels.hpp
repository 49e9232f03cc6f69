#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

// Dense fitting kernels, templated on the scalar type. The frame/spec layer
// in model.hpp feeds these with doubles.
namespace essaylens::stats {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Elementwise logistic function.
template <class Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& eta) {
  using S = typename Derived::Scalar;
  return eta.unaryExpr([](S e) { return e >= 0 ? S(1) / (S(1) + std::exp(-e)) : std::exp(e) / (S(1) + std::exp(e)); });
}

/// log(1 + exp(x)) without overflow.
template <class Scalar>
Scalar log1pexp(Scalar x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// Bernoulli log-likelihood at linear predictor eta.
template <class DerivedY, class DerivedE>
typename DerivedE::Scalar logit_loglik(const Eigen::MatrixBase<DerivedY>& y, const Eigen::MatrixBase<DerivedE>& eta) {
  using S = typename DerivedE::Scalar;
  S ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += S(y(i)) * eta(i) - log1pexp(eta(i));
  return ll;
}

template <class Scalar>
struct IrlsResult {
  Vec<Scalar> beta;
  Mat<Scalar> cov;       ///< inverse observed information at beta
  Vec<Scalar> gradient;  ///< X'(y - p) at beta
  Scalar loglik = 0;
  int iterations = 0;
  bool converged = false;
  bool singular = false;
};

/// Newton/IRLS for the logit link. Stops when the deviance moves by less
/// than tol or after max_iter steps.
template <class DerivedX, class DerivedY>
IrlsResult<typename DerivedX::Scalar> irls_logit(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y,
                                                 int max_iter = 100, typename DerivedX::Scalar tol = 1e-8) {
  using S = typename DerivedX::Scalar;
  const auto p = X.cols();
  IrlsResult<S> r;
  r.beta = Vec<S>::Zero(p);
  Vec<S> eta = X * r.beta;
  S dev = -2 * logit_loglik(y, eta);
  Eigen::LDLT<Mat<S>> ldlt;
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    const Vec<S> mu = sigmoid(eta.array()).matrix();
    const Vec<S> w = (mu.array() * (S(1) - mu.array())).max(S(1e-300)).matrix();
    const Vec<S> grad = X.transpose() * (y.template cast<S>() - mu);
    const Mat<S> H = X.transpose() * w.asDiagonal() * X;
    ldlt.compute(H);
    if (ldlt.info() != Eigen::Success) {
      r.singular = true;
      break;
    }
    const Vec<S> step = ldlt.solve(grad);
    r.beta += step;
    eta = X * r.beta;
    const S new_dev = -2 * logit_loglik(y, eta);
    const S change = std::abs(new_dev - dev);
    dev = new_dev;
    if (change < tol) {
      r.converged = true;
      break;
    }
  }
  if (r.iterations > max_iter) r.iterations = max_iter;
  const Vec<S> mu = sigmoid(eta.array()).matrix();
  const Vec<S> w = (mu.array() * (S(1) - mu.array())).matrix();
  r.gradient = X.transpose() * (y.template cast<S>() - mu);
  const Mat<S> H = X.transpose() * w.asDiagonal() * X;
  ldlt.compute(H);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || (ldlt.vectorD().array() <= S(0)).any()) r.singular = true;
  r.cov = ldlt.solve(Mat<S>::Identity(p, p));
  r.cov = (r.cov + r.cov.transpose()) / S(2);
  r.loglik = -dev / 2;
  return r;
}

template <class Scalar>
struct OlsResult {
  Vec<Scalar> beta;
  Mat<Scalar> cov;  ///< sigma^2 (X'X)^-1
  Vec<Scalar> residuals;
  Scalar rss = 0;
  Scalar sigma2 = 0;  ///< rss / (n - p)
};

/// Least squares through a column-pivoted QR.
template <class DerivedX, class DerivedY>
OlsResult<typename DerivedX::Scalar> ols(const Eigen::MatrixBase<DerivedX>& X, const Eigen::MatrixBase<DerivedY>& y) {
  using S = typename DerivedX::Scalar;
  OlsResult<S> r;
  const auto n = X.rows();
  const auto p = X.cols();
  Eigen::ColPivHouseholderQR<Mat<S>> qr(X);
  r.beta = qr.solve(y.template cast<S>());
  r.residuals = y.template cast<S>() - X * r.beta;
  r.rss = r.residuals.squaredNorm();
  r.sigma2 = n > p ? r.rss / S(n - p) : S(0);
  // (X'X)^-1 = P R^-1 R^-T P'
  const Mat<S> R = qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Mat<S> Rinv = R.template triangularView<Eigen::Upper>().solve(Mat<S>::Identity(p, p));
  const Mat<S> inner = Rinv * Rinv.transpose();
  const auto& P = qr.colsPermutation();
  r.cov = r.sigma2 * (P * inner * P.transpose());
  return r;
}

/// Column indices (into X) that make X rank deficient; empty when full rank.
template <class Derived>
std::vector<Eigen::Index> dependent_columns(const Eigen::MatrixBase<Derived>& X, double threshold = 1e-9) {
  using S = typename Derived::Scalar;
  Eigen::ColPivHouseholderQR<Mat<S>> qr(X);
  qr.setThreshold(threshold);
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = qr.rank(); k < X.cols(); ++k) out.push_back(qr.colsPermutation().indices()(k));
  return out;
}

}  // namespace essaylens::stats
