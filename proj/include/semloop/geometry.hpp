#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace semloop {

// Rigid transform mapping target-frame points into the query frame.
// The same convention is used across node alignment, ICP and the
// point-to-plane stage: p_q = R * p_t + t.
struct PoseSE3 {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static PoseSE3 identity() { return {}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  PoseSE3 inverse() const {
    PoseSE3 inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
  }

  // this ∘ other: first apply `other`, then this.
  PoseSE3 compose(const PoseSE3& other) const {
    PoseSE3 out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
  }

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
  }

  // Row-major 3x4 [R|t] as used by the on-disk pose format.
  Eigen::Matrix<double, 3, 4> matrix34() const {
    Eigen::Matrix<double, 3, 4> m;
    m.leftCols<3>() = rotation;
    m.col(3) = translation;
    return m;
  }
};

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

// Rodrigues' formula; safe near zero angle.
inline Eigen::Matrix3d so3_exp(const Eigen::Vector3d& omega) {
  const double theta = omega.norm();
  if (theta < 1e-12) {
    return Eigen::Matrix3d::Identity() + skew(omega);
  }
  const Eigen::Vector3d axis = omega / theta;
  return Eigen::AngleAxisd(theta, axis).toRotationMatrix();
}

// Nearest orthogonal matrix with det +1 (projection via SVD).
inline Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

// Deviation from a proper rotation: max of ||R^T R - I||_max and |det R - 1|.
inline double rotation_drift(const Eigen::Matrix3d& r) {
  const double ortho = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  const double det = std::abs(r.determinant() - 1.0);
  return std::max(ortho, det);
}

inline double rotation_angle(const Eigen::Matrix3d& r) {
  // Clamp for numerical safety; trace of a rotation is in [-1, 3].
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c);
}

// Heading about the sensor's vertical (z) axis.
inline double yaw_of(const Eigen::Matrix3d& r) { return std::atan2(r(1, 0), r(0, 0)); }

inline double deg2rad(double deg) { return deg * M_PI / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / M_PI; }

// Least-squares rigid fit: argmin_{R,t} sum ||R * source_i + t - target_i||^2,
// solved in closed form (centroids, cross-covariance, SVD with det-sign fix).
// Requires source.size() == target.size() >= 3 non-degenerate points.
PoseSE3 solve_rigid_procrustes(const std::vector<Eigen::Vector3d>& source,
                               const std::vector<Eigen::Vector3d>& target);

// True when the three points span a proper triangle; cross-product norm test.
bool spans_triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                    const Eigen::Vector3d& c, double min_cross_norm = 1e-6);

}  // namespace semloop
