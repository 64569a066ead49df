#include "semloop/geometry.hpp"

#include <stdexcept>

namespace semloop {

PoseSE3 solve_rigid_procrustes(const std::vector<Eigen::Vector3d>& source,
                               const std::vector<Eigen::Vector3d>& target) {
  if (source.size() != target.size() || source.size() < 3) {
    throw std::invalid_argument("solve_rigid_procrustes: need >= 3 paired points");
  }
  const double n = static_cast<double>(source.size());

  Eigen::Vector3d mu_s = Eigen::Vector3d::Zero();
  Eigen::Vector3d mu_t = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    mu_s += source[i];
    mu_t += target[i];
  }
  mu_s /= n;
  mu_t /= n;

  // Cross-covariance H = sum (s_i - mu_s)(t_i - mu_t)^T.
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < source.size(); ++i) {
    h.noalias() += (source[i] - mu_s) * (target[i] - mu_t).transpose();
  }

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) {
    d(2, 2) = -1.0;  // reflection fix, keeps det(R) = +1
  }

  PoseSE3 pose;
  pose.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  pose.translation = mu_t - pose.rotation * mu_s;
  return pose;
}

bool spans_triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                    const Eigen::Vector3d& c, double min_cross_norm) {
  return ((b - a).cross(c - a)).norm() > min_cross_norm;
}

}  // namespace semloop
