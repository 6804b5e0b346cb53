#include "floc/range_image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "floc/errors.hpp"
#include "floc/rng.hpp"

namespace floc {

void ProjectionConfig::validate() const {
  if (width < 8 || height < 2) {
    throw std::invalid_argument("ProjectionConfig: width >= 8 and height >= 2 required");
  }
  if (!(vertical_fov_min < vertical_fov_max)) {
    throw std::invalid_argument("ProjectionConfig: vertical_fov_min must be < vertical_fov_max");
  }
  if (!(max_range > 0.0)) {
    throw std::invalid_argument("ProjectionConfig: max_range must be positive");
  }
}

ProjectionConfig ProjectionConfig::vlp16(int width, double max_range) {
  ProjectionConfig cfg;
  cfg.width = width;
  cfg.height = 16;
  cfg.vertical_fov_min = -10.0 * kPi / 180.0;
  cfg.vertical_fov_max = 10.0 * kPi / 180.0;
  cfg.max_range = max_range;
  return cfg;
}

ProjectionConfig ProjectionConfig::os132(int width, double max_range) {
  ProjectionConfig cfg;
  cfg.width = width;
  cfg.height = 32;
  cfg.vertical_fov_min = -22.5 * kPi / 180.0;
  cfg.vertical_fov_max = 22.5 * kPi / 180.0;
  cfg.max_range = max_range;
  return cfg;
}

RangeImage::RangeImage(const ProjectionConfig& config, double fill)
    : height_(config.height), width_(config.width), config_(config) {
  config.validate();
  depth_.assign(static_cast<size_t>(height_) * width_, fill);
}

size_t RangeImage::return_count() const {
  size_t n = 0;
  for (double d : depth_) {
    if (d != kNoReturn) ++n;
  }
  return n;
}

RangeImage project_spherical(const PointCloud& cloud, const ProjectionConfig& cfg) {
  cfg.validate();
  if (cloud.empty()) {
    throw EmptyCloudError("project_spherical: empty point cloud");
  }
  RangeImage img(cfg);
  const double fov_span = cfg.vertical_fov_max - cfg.vertical_fov_min;
  for (const auto& p : cloud) {
    const double range = p.norm();
    if (!(range > 0.0) || range > cfg.max_range) continue;
    const double horizontal = std::hypot(p.x(), p.y());
    const double elevation = std::atan2(p.z(), horizontal);
    if (elevation < cfg.vertical_fov_min || elevation > cfg.vertical_fov_max) continue;
    const double yaw = std::atan2(p.y(), p.x());
    int col = static_cast<int>(std::floor((yaw + kPi) / (2.0 * kPi) * cfg.width)) % cfg.width;
    if (col < 0) col += cfg.width;
    int row = static_cast<int>(std::floor((elevation - cfg.vertical_fov_min) / fov_span * cfg.height));
    row = std::clamp(row, 0, cfg.height - 1);
    double& cell = img.at(row, col);
    if (cell == RangeImage::kNoReturn || range < cell) {
      cell = range;
    }
  }
  return img;
}

RangeImage shift_columns(const RangeImage& img, int s) {
  RangeImage out = img;
  const int w = img.width();
  int shift = s % w;
  if (shift < 0) shift += w;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < w; ++c) {
      out.at(r, (c + shift) % w) = img.at(r, c);
    }
  }
  return out;
}

double estimate_noise_variance(const RangeImage& img, double edge_threshold) {
  const int h = img.height();
  const int w = img.width();
  if (h < 3 || w < 3) {
    throw UnreliableNoiseEstimate("estimate_noise_variance: image smaller than 3x3");
  }
  const size_t finite = img.return_count();
  if (finite * 10 < static_cast<size_t>(h) * w) {
    throw UnreliableNoiseEstimate("estimate_noise_variance: fewer than 10% finite pixels");
  }

  // Immerkaer mask [[1,-2,1],[-2,4,-2],[1,-2,1]]; a window is used only
  // when all nine pixels are finite and no adjacent pair steps by more
  // than edge_threshold (depth discontinuities are not noise).
  double sum_abs = 0.0;
  size_t windows = 0;
  for (int r = 1; r + 1 < h; ++r) {
    for (int c = 1; c + 1 < w; ++c) {
      bool usable = true;
      double window[3][3];
      for (int dr = -1; dr <= 1 && usable; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (!img.has_return(r + dr, c + dc)) {
            usable = false;
            break;
          }
          window[dr + 1][dc + 1] = img.at(r + dr, c + dc);
        }
      }
      if (!usable) continue;
      for (int a = 0; a < 3 && usable; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (std::abs(window[a][b] - window[a][b + 1]) > edge_threshold ||
              std::abs(window[b][a] - window[b + 1][a]) > edge_threshold) {
            usable = false;
            break;
          }
        }
      }
      if (!usable) continue;
      const double response = window[0][0] - 2.0 * window[0][1] + window[0][2] -
                              2.0 * window[1][0] + 4.0 * window[1][1] - 2.0 * window[1][2] +
                              window[2][0] - 2.0 * window[2][1] + window[2][2];
      sum_abs += std::abs(response);
      ++windows;
    }
  }
  if (windows == 0) {
    throw UnreliableNoiseEstimate("estimate_noise_variance: no usable 3x3 window");
  }
  const double sigma = std::sqrt(kPi / 2.0) * sum_abs / (6.0 * static_cast<double>(windows));
  return sigma * sigma;
}

RangeImage inject_gaussian_noise(const RangeImage& img, double variance, std::uint64_t seed) {
  if (variance < 0.0) {
    throw std::invalid_argument("inject_gaussian_noise: variance must be >= 0");
  }
  RangeImage out = img;
  if (variance == 0.0) {
    return out;
  }
  const double sigma = std::sqrt(variance);
  const double max_range = img.config().max_range;
  GaussianSampler rng(seed);
  for (double& d : out.data()) {
    if (d == RangeImage::kNoReturn) continue;
    d = std::clamp(d + rng.sample(0.0, sigma), 1e-9, max_range);
  }
  return out;
}

namespace {
constexpr char kImageMagic[4] = {'F', 'L', 'R', 'I'};
constexpr std::uint32_t kImageVersion = 1;

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

void save_range_image(const std::string& path, const RangeImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw std::invalid_argument("save_range_image: cannot open " + path);
  }
  os.write(kImageMagic, 4);
  write_raw(os, kImageVersion);
  write_raw(os, static_cast<std::uint64_t>(img.data().size()));
  write_raw(os, static_cast<std::uint32_t>(img.height()));
  write_raw(os, static_cast<std::uint32_t>(img.width()));
  write_raw(os, img.config().vertical_fov_min);
  write_raw(os, img.config().vertical_fov_max);
  write_raw(os, img.config().max_range);
  for (double d : img.data()) {
    const double on_disk = d == RangeImage::kNoReturn ? std::nan("") : d;
    write_raw(os, on_disk);
  }
  if (!os) {
    throw std::invalid_argument("save_range_image: write failed for " + path);
  }
}

RangeImage load_range_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw std::invalid_argument("load_range_image: cannot open " + path);
  }
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kImageMagic, 4) != 0) {
    throw std::invalid_argument("load_range_image: bad magic in " + path);
  }
  if (read_raw<std::uint32_t>(is, "version") != kImageVersion) {
    throw std::invalid_argument("load_range_image: unsupported version");
  }
  const auto count = read_raw<std::uint64_t>(is, "count");
  ProjectionConfig cfg;
  cfg.height = static_cast<int>(read_raw<std::uint32_t>(is, "height"));
  cfg.width = static_cast<int>(read_raw<std::uint32_t>(is, "width"));
  cfg.vertical_fov_min = read_raw<double>(is, "fov_min");
  cfg.vertical_fov_max = read_raw<double>(is, "fov_max");
  cfg.max_range = read_raw<double>(is, "max_range");
  if (count != static_cast<std::uint64_t>(cfg.height) * cfg.width) {
    throw std::invalid_argument("load_range_image: count does not match dimensions");
  }
  RangeImage img(cfg);
  for (double& d : img.data()) {
    const double on_disk = read_raw<double>(is, "pixel");
    d = std::isnan(on_disk) ? RangeImage::kNoReturn : on_disk;
  }
  return img;
}

}  // namespace floc
