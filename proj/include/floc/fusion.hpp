#pragma once

#include <string>

#include "floc/descriptor.hpp"

namespace floc {

/// Confidence gates and candidate budget for the switching rule.
struct FusionConfig {
  double noise_variance_threshold = 0.01;  // meters^2, LiDAR gate
  double rssi_floor = -85.0;               // dBm, Wi-Fi gate
  size_t rssi_min_count = 3;
  size_t top_k = 10;

  void validate() const;
};

enum class FusionMode {
  kLidarOnly,
  kWifiOnly,
  kIntersection,
  kIntersectionEmptyFallback,
};

const char* to_string(FusionMode mode);
FusionMode fusion_mode_from_string(const std::string& name);

struct FusionResult {
  CandidateList candidates;  // K_f, best-first
  FusionMode mode = FusionMode::kIntersection;
  double lidar_noise = 0.0;  // estimated sigma^2 for the query image
  bool wifi_ok = true;
};

/// The switching rule: noisy LiDAR -> Wi-Fi candidates only; weak Wi-Fi
/// -> LiDAR candidates only; otherwise the intersection of both sets
/// ordered by Wi-Fi rank, falling back to the Wi-Fi top-1 when the
/// intersection is empty. Throws LocalizationUnavailable when both
/// gates fail (or the surviving list is empty).
FusionResult select_candidates(const CandidateList& k_l, const CandidateList& k_w,
                               double noise_var, bool wifi_ok, const FusionConfig& cfg);

/// First (best) entry of the fused candidate list.
size_t best_candidate(const FusionResult& r);

}  // namespace floc
