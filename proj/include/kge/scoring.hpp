#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "kge/types.hpp"

namespace kge {

/// e_s^T R_p e_o for a full relation matrix. Accepts any vector/matrix
/// expressions of matching sizes.
template <typename S, typename R, typename O>
Scalar bilinear_score(const Eigen::MatrixBase<S>& subject,
                      const Eigen::MatrixBase<R>& relation,
                      const Eigen::MatrixBase<O>& object) {
  return subject.dot(relation * object);
}

/// sum_i e_{s,i} r_{p,i} e_{o,i} for a diagonal relation. The entity
/// factors multiply first, which makes the value bit-exactly symmetric
/// under subject/object exchange.
template <typename S, typename R, typename O>
Scalar diagonal_score(const Eigen::MatrixBase<S>& subject,
                      const Eigen::MatrixBase<R>& relation_diag,
                      const Eigen::MatrixBase<O>& object) {
  return (subject.array() * object.array() * relation_diag.array()).sum();
}

/// ||e_s + r_p - e_o||.
template <typename S, typename R, typename O>
Scalar translation_distance(const Eigen::MatrixBase<S>& subject,
                            const Eigen::MatrixBase<R>& relation,
                            const Eigen::MatrixBase<O>& object) {
  return (subject + relation - object).norm();
}

/// Logistic function, stable for large |x|.
inline Scalar sigmoid(Scalar x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  Scalar e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + exp(x)) computed as max(x, 0) + log1p(exp(-|x|)).
inline Scalar softplus(Scalar x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline Scalar log_sigmoid(Scalar x) { return -softplus(-x); }

}  // namespace kge
