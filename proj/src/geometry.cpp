#include "floc/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "floc/errors.hpp"
#include "json.hpp"

namespace floc {

double wrap_angle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * kPi);
  if (wrapped <= -kPi) {
    wrapped = kPi;
  }
  return wrapped;
}

Pose::Pose(double x_, double y_, double z_, double theta_)
    : x(x_), y(y_), z(z_), theta(wrap_angle(theta_)) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) || !std::isfinite(theta_)) {
    throw std::invalid_argument("Pose: coordinates must be finite");
  }
}

Eigen::Matrix4d RigidTransform::homogeneous() const {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h.block<3, 3>(0, 0) = rotation;
  h.block<3, 1>(0, 3) = translation;
  h(3, 3) = 1.0;
  return h;
}

bool RigidTransform::is_valid(double tolerance) const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  const double ortho_err = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho_err < tolerance && std::abs(rotation.determinant() - 1.0) < tolerance &&
         translation.allFinite();
}

void Trajectory::validate() const {
  if (poses.empty()) {
    throw std::invalid_argument("Trajectory: must contain at least one pose");
  }
  if (poses.size() != timestamps.size()) {
    throw std::invalid_argument("Trajectory: poses/timestamps length mismatch");
  }
  for (size_t i = 1; i < timestamps.size(); ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument("Trajectory: timestamps must strictly increase");
    }
  }
}

RigidTransform make_yaw_transform(const Pose& pose) {
  RigidTransform t;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  t.rotation << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  t.translation = Eigen::Vector3d(pose.x, pose.y, pose.z);
  return t;
}

PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud) {
  if (cloud.empty()) {
    throw EmptyCloudError("apply_transform: empty point cloud");
  }
  PointCloud out;
  out.reserve(cloud.size());
  for (const auto& p : cloud) {
    out.push_back(t.rotation * p + t.translation);
  }
  return out;
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform t;
  t.rotation = a.rotation * b.rotation;
  t.translation = a.rotation * b.translation + a.translation;
  return t;
}

RigidTransform inverse(const RigidTransform& t) {
  RigidTransform inv;
  inv.rotation = t.rotation.transpose();
  inv.translation = -(inv.rotation * t.translation);
  return inv;
}

double pose_distance(const Pose& a, const Pose& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double transform_yaw(const RigidTransform& t) {
  return std::atan2(t.rotation(1, 0), t.rotation(0, 0));
}

Pose pose_from_transform(const RigidTransform& t) {
  return Pose(t.translation.x(), t.translation.y(), t.translation.z(), transform_yaw(t));
}

// --- serialization ---------------------------------------------------

namespace {

constexpr char kCloudMagic[4] = {'F', 'L', 'P', 'C'};
constexpr std::uint32_t kCloudVersion = 1;

template <typename T>
void write_raw(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is, const char* what) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw std::invalid_argument(std::string("truncated file while reading ") + what);
  }
  return value;
}

}  // namespace

void save_point_cloud(const std::string& path, const PointCloud& cloud) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::invalid_argument("save_point_cloud: cannot open " + path);
  }
  os.write(kCloudMagic, 4);
  write_raw(os, kCloudVersion);
  write_raw(os, static_cast<std::uint64_t>(cloud.size()));
  for (const auto& p : cloud) {
    write_raw(os, p.x());
    write_raw(os, p.y());
    write_raw(os, p.z());
  }
  if (!os) {
    throw std::invalid_argument("save_point_cloud: write failed for " + path);
  }
}

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw std::invalid_argument("load_point_cloud: cannot open " + path);
  }
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kCloudMagic, 4) != 0) {
    throw std::invalid_argument("load_point_cloud: bad magic in " + path);
  }
  const auto version = read_raw<std::uint32_t>(is, "version");
  if (version != kCloudVersion) {
    throw std::invalid_argument("load_point_cloud: unsupported version");
  }
  const auto count = read_raw<std::uint64_t>(is, "count");
  PointCloud cloud;
  cloud.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double x = read_raw<double>(is, "point");
    const double y = read_raw<double>(is, "point");
    const double z = read_raw<double>(is, "point");
    cloud.emplace_back(x, y, z);
  }
  return cloud;
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  traj.validate();
  std::ofstream os(path);
  if (!os) {
    throw std::invalid_argument("save_trajectory: cannot open " + path);
  }
  for (size_t i = 0; i < traj.size(); ++i) {
    nlohmann::json line = {{"t", traj.timestamps[i]}, {"x", traj.poses[i].x},
                           {"y", traj.poses[i].y},    {"z", traj.poses[i].z},
                           {"theta", traj.poses[i].theta}};
    os << line.dump() << "\n";
  }
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::invalid_argument("load_trajectory: cannot open " + path);
  }
  Trajectory traj;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    traj.poses.emplace_back(j.at("x").get<double>(), j.at("y").get<double>(),
                            j.at("z").get<double>(), j.at("theta").get<double>());
    traj.timestamps.push_back(j.at("t").get<double>());
  }
  traj.validate();
  return traj;
}

}  // namespace floc
