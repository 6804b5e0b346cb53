#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace floc {

constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi]; the tie at -pi maps to +pi.
double wrap_angle(double angle);

/// 4-DoF pose: position in meters, yaw in radians. theta is normalized
/// into (-pi, pi] on construction; all coordinates must be finite.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double z_, double theta_);
};

/// Rigid transform with a proper rotation (det +1, orthonormal). Built
/// from a Pose the rotation is a pure yaw R_z(theta).
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidTransform identity() { return {}; }

  /// 4x4 homogeneous form; last row is (0,0,0,1) exactly.
  Eigen::Matrix4d homogeneous() const;

  /// Orthonormality / determinant check, infinity-norm tolerance.
  bool is_valid(double tolerance = 1e-9) const;
};

using PointCloud = std::vector<Eigen::Vector3d>;

/// Ordered poses with strictly increasing timestamps (seconds).
struct Trajectory {
  std::vector<Pose> poses;
  std::vector<double> timestamps;

  size_t size() const { return poses.size(); }
  /// Throws std::invalid_argument when empty, mismatched, or with
  /// non-increasing timestamps.
  void validate() const;
};

RigidTransform make_yaw_transform(const Pose& pose);

/// Applies t to every point. Throws EmptyCloudError on an empty cloud.
PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud);

inline Eigen::Vector3d apply_transform(const RigidTransform& t, const Eigen::Vector3d& p) {
  return t.rotation * p + t.translation;
}

/// compose(a, b) applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);

/// Euclidean distance over (x, y, z); theta is deliberately ignored to
/// match the 3 m radial hit criterion.
double pose_distance(const Pose& a, const Pose& b);

/// Yaw angle of a transform's rotation (atan2 of the first column).
double transform_yaw(const RigidTransform& t);

/// Collapses a transform to (x, y, z, yaw). Lossy for non-yaw rotations.
Pose pose_from_transform(const RigidTransform& t);

// --- serialization ---------------------------------------------------

/// Binary container: magic "FLPC", u32 version=1, u64 count, then
/// count x 3 float64, little endian.
void save_point_cloud(const std::string& path, const PointCloud& cloud);
PointCloud load_point_cloud(const std::string& path);

/// JSON lines, one pose per line: {"t":..,"x":..,"y":..,"z":..,"theta":..}
void save_trajectory(const std::string& path, const Trajectory& traj);
Trajectory load_trajectory(const std::string& path);

}  // namespace floc
