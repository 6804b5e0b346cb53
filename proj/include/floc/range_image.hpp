#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floc/geometry.hpp"

namespace floc {

/// Spherical projection grid: width yaw bins over the full 360 degrees,
/// height elevation bins over [vertical_fov_min, vertical_fov_max].
struct ProjectionConfig {
  int width = 360;
  int height = 16;
  double vertical_fov_min = -10.0 * kPi / 180.0;
  double vertical_fov_max = 10.0 * kPi / 180.0;
  double max_range = 50.0;

  void validate() const;

  /// 16 channels, 20 degree vertical FOV.
  static ProjectionConfig vlp16(int width = 360, double max_range = 50.0);
  /// 32 channels, 45 degree vertical FOV.
  static ProjectionConfig os132(int width = 360, double max_range = 50.0);
};

/// Row-major depth grid in meters. Pixels without a return hold
/// kNoReturn; finite depths lie in (0, max_range]. Column 0 corresponds
/// to yaw -pi; row 0 to vertical_fov_min.
class RangeImage {
 public:
  static constexpr double kNoReturn = -1.0;

  RangeImage() = default;
  RangeImage(const ProjectionConfig& config, double fill = kNoReturn);

  int height() const { return height_; }
  int width() const { return width_; }
  const ProjectionConfig& config() const { return config_; }

  double at(int row, int col) const { return depth_[static_cast<size_t>(row) * width_ + col]; }
  double& at(int row, int col) { return depth_[static_cast<size_t>(row) * width_ + col]; }
  bool has_return(int row, int col) const { return at(row, col) != kNoReturn; }

  const std::vector<double>& data() const { return depth_; }
  std::vector<double>& data() { return depth_; }

  size_t return_count() const;
  /// True when the projection produced no returns at all (e.g. every
  /// input point fell outside the vertical FOV).
  bool no_coverage() const { return return_count() == 0; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> depth_;
  ProjectionConfig config_;
};

/// Projects a cloud to a range image. Keeps the minimum range when
/// points collide in a pixel; drops points outside the vertical FOV or
/// beyond max_range. Throws EmptyCloudError on an empty cloud.
RangeImage project_spherical(const PointCloud& cloud, const ProjectionConfig& cfg);

/// Circularly shifts columns right by s (content of column c moves to
/// column (c+s) mod width), matching a cloud yawed by +s*(2*pi/width).
RangeImage shift_columns(const RangeImage& img, int s);

/// Immerkaer single-pass noise estimate: convolves the 3x3
/// Laplacian-difference mask and returns sigma^2 in meters^2.
/// Windows containing a no-return pixel, or a neighbor depth step
/// larger than edge_threshold meters, are excluded from the average.
/// Throws UnreliableNoiseEstimate when the image is smaller than 3x3,
/// has fewer than 10% finite pixels, or no usable window remains.
double estimate_noise_variance(const RangeImage& img, double edge_threshold = 0.5);

/// Adds i.i.d. N(0, variance) to every finite pixel, clamped into
/// (0, max_range]. No-return pixels are untouched. Deterministic per seed.
RangeImage inject_gaussian_noise(const RangeImage& img, double variance, std::uint64_t seed);

/// Same binary container as point clouds with magic "FLRI": header,
/// then height/width/FOV/max_range, then count=h*w row-major float64
/// with no-return pixels encoded as NaN on disk only.
void save_range_image(const std::string& path, const RangeImage& img);
RangeImage load_range_image(const std::string& path);

}  // namespace floc
