#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "floc/geometry.hpp"
#include "floc/range_image.hpp"
#include "floc/wifi.hpp"

namespace floc {

/// Vertical wall panel: 2D footprint segment extruded from z=0 to
/// height. Glass panels set lidar_opaque=false (the beam passes) while
/// still attenuating RF. rf_attenuation_db < 0 means "use the radio
/// model default". Roughness displaces the surface along its normal by
/// a smooth value-noise field, consistent across viewpoints.
struct WallSegment {
  Eigen::Vector2d p0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d p1 = Eigen::Vector2d::Zero();
  double height = 3.0;
  bool lidar_opaque = true;
  double rf_attenuation_db = -1.0;
  double roughness_amplitude = 0.0;
  double roughness_scale = 1.0;
};

struct Bounds2 {
  Eigen::Vector2d min = Eigen::Vector2d::Zero();
  Eigen::Vector2d max = Eigen::Vector2d::Zero();

  bool contains(const Eigen::Vector2d& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
};

/// 2.5D world: vertical walls plus flat floor (z=0) and ceiling.
struct Environment {
  std::vector<WallSegment> walls;
  double ceiling_height = 3.0;
  Bounds2 bounds;
  std::uint64_t roughness_seed = 0;

  bool contains(const Pose& pose) const {
    return bounds.contains({pose.x, pose.y}) && pose.z >= 0.0 && pose.z <= ceiling_height;
  }
  void validate() const;
};

struct AccessPointSpec {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double tx_power_dbm = -40.0;  // received power at the 1 m reference
  MacAddress mac = 0;
  int channel = 1;
  std::string ssid;
};

/// Log-distance path loss with per-wall attenuation. Shadowing is a
/// spatially-correlated Gaussian field keyed per AP (so fingerprints
/// are repeatable at a location), plus an i.i.d. per-scan measurement
/// jitter driven by the scan seed.
struct RadioModel {
  double path_loss_exponent = 2.2;       // 2.2 corridor, 1.8 tunnel waveguide
  double wall_attenuation_db = 6.0;
  double shadowing_sigma_db = 3.0;
  double shadowing_correlation_m = 2.5;
  double measurement_sigma_db = 1.0;
  double rssi_floor = -95.0;             // detection limit
  std::uint64_t shadowing_seed = 0;

  void validate() const;
};

struct LidarSpec {
  ProjectionConfig projection;
  double range_noise_sigma = 0.01;  // meters per return
  double mount_height = 0.8;        // sensor z above the floor
};

using Route = std::vector<Eigen::Vector2d>;

double route_length(const Route& route);
/// Offsets every vertex laterally (positive = left of travel) with
/// mitered corners. A closed route stays closed.
Route offset_route(const Route& route, double offset);

struct World {
  std::string name;
  Environment env;
  std::vector<AccessPointSpec> aps;
  RadioModel radio;
  LidarSpec lidar;
  Route route;
  double default_speed_kmh = 5.0;
};

/// First opaque surface hit along the ray, or nullopt. Exposed for tests.
std::optional<double> raycast(const Environment& env, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& direction, double max_range);

/// One simulated scan in the sensor frame: a ray per image cell at the
/// bin center, range noise N(0, sigma^2) per return. Deterministic per
/// seed. Throws std::invalid_argument when the pose is out of bounds.
PointCloud simulate_lidar_scan(const Environment& env, const Pose& pose, const LidarSpec& lidar,
                               std::uint64_t seed);

/// Raw AP readings at the pose; APs below the detection floor are
/// dropped. Deterministic per seed.
std::vector<ApReading> simulate_wifi_scan(const Environment& env, const Pose& pose,
                                          const std::vector<AccessPointSpec>& aps,
                                          const RadioModel& radio, std::uint64_t seed);

struct SurveySample {
  Pose pose;
  double timestamp = 0.0;
  PointCloud scan;
  std::vector<ApReading> wifi;
};

/// Ground-truthed (pose, LiDAR, Wi-Fi) triples along the route at
/// spacing speed/wifi_rate_hz, heading along the route tangent.
std::vector<SurveySample> generate_survey(const World& world, double speed_mps,
                                          double wifi_rate_hz, std::uint64_t seed,
                                          double lateral_offset = 0.0);

/// Preset venues: a self-similar university corridor loop and a
/// branching mine drift.
World ltu_corridor_world();
World mine_tunnel_world();
std::map<std::string, World> preset_worlds();

void save_world(const std::string& path, const World& world);
World load_world(const std::string& path);

}  // namespace floc
