#include "floc/fusion.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "floc/errors.hpp"

namespace floc {

void FusionConfig::validate() const {
  if (!std::isfinite(noise_variance_threshold) || !std::isfinite(rssi_floor)) {
    throw std::invalid_argument("FusionConfig: thresholds must be finite");
  }
  if (top_k == 0) {
    throw std::invalid_argument("FusionConfig: top_k must be >= 1");
  }
}

const char* to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::kLidarOnly:
      return "LIDAR_ONLY";
    case FusionMode::kWifiOnly:
      return "WIFI_ONLY";
    case FusionMode::kIntersection:
      return "INTERSECTION";
    case FusionMode::kIntersectionEmptyFallback:
      return "INTERSECTION_EMPTY_FALLBACK";
  }
  return "UNKNOWN";
}

FusionMode fusion_mode_from_string(const std::string& name) {
  if (name == "LIDAR_ONLY") return FusionMode::kLidarOnly;
  if (name == "WIFI_ONLY") return FusionMode::kWifiOnly;
  if (name == "INTERSECTION") return FusionMode::kIntersection;
  if (name == "INTERSECTION_EMPTY_FALLBACK") return FusionMode::kIntersectionEmptyFallback;
  throw std::invalid_argument("unknown fusion mode '" + name + "'");
}

FusionResult select_candidates(const CandidateList& k_l, const CandidateList& k_w,
                               double noise_var, bool wifi_ok, const FusionConfig& cfg) {
  cfg.validate();
  if (k_l.empty() && k_w.empty()) {
    throw LocalizationUnavailable("select_candidates: both candidate sets empty");
  }
  const bool lidar_noisy = noise_var >= cfg.noise_variance_threshold;

  FusionResult result;
  result.lidar_noise = noise_var;
  result.wifi_ok = wifi_ok;

  if (lidar_noisy && !wifi_ok) {
    throw LocalizationUnavailable("select_candidates: LiDAR noisy and Wi-Fi weak");
  }
  if (lidar_noisy) {
    if (k_w.empty()) {
      throw LocalizationUnavailable("select_candidates: LiDAR noisy and no Wi-Fi candidates");
    }
    result.candidates = k_w;
    result.mode = FusionMode::kWifiOnly;
    return result;
  }
  if (!wifi_ok) {
    if (k_l.empty()) {
      throw LocalizationUnavailable("select_candidates: Wi-Fi weak and no LiDAR candidates");
    }
    result.candidates = k_l;
    result.mode = FusionMode::kLidarOnly;
    return result;
  }

  // healthy sensors: intersect, keeping Wi-Fi rank order
  std::unordered_set<size_t> lidar_set(k_l.indices.begin(), k_l.indices.end());
  for (size_t i = 0; i < k_w.indices.size(); ++i) {
    if (lidar_set.count(k_w.indices[i]) > 0) {
      result.candidates.indices.push_back(k_w.indices[i]);
      result.candidates.scores.push_back(k_w.scores[i]);
    }
  }
  if (!result.candidates.empty()) {
    result.mode = FusionMode::kIntersection;
    return result;
  }
  if (k_w.empty()) {
    throw LocalizationUnavailable("select_candidates: empty intersection and no Wi-Fi fallback");
  }
  result.candidates.indices.push_back(k_w.indices.front());
  result.candidates.scores.push_back(k_w.scores.front());
  result.mode = FusionMode::kIntersectionEmptyFallback;
  return result;
}

size_t best_candidate(const FusionResult& r) {
  if (r.candidates.empty()) {
    throw std::invalid_argument("best_candidate: empty candidate list");
  }
  return r.candidates.indices.front();
}

}  // namespace floc
