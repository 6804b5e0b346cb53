#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "floc/descriptor.hpp"
#include "floc/fusion.hpp"
#include "floc/geometry.hpp"
#include "floc/range_image.hpp"
#include "floc/wifi.hpp"

namespace floc {

struct IcpParams {
  int max_iterations = 50;
  double convergence_epsilon = 1e-4;          // meters, mean correspondence shift
  double max_correspondence_distance = 2.0;   // meters
  double min_fitness = 0.25;                  // inlier fraction required at exit

  void validate() const;
};

struct RegistrationOutcome {
  RigidTransform transform;
  double fitness = 0.0;
  int iterations_used = 0;
  bool converged = false;
  /// Mean inlier residual after each iteration, for convergence checks.
  std::vector<double> residual_history;
};

/// Initial guess for ICP: the candidate's map pose with the regressed
/// yaw discrepancy added.
RigidTransform build_prior(const Pose& candidate_pose, double delta_theta);

/// Point-to-point ICP with SVD (Kabsch) alignment and nearest-neighbor
/// correspondences from a k-d tree over the target. Throws
/// RegistrationFailed when fewer than 10 inlier pairs remain at any
/// iteration or the final fitness is below min_fitness.
RegistrationOutcome icp_register(const PointCloud& source, const PointCloud& target,
                                 const RigidTransform& prior, const IcpParams& params);

/// Everything the online phase needs from the offline survey.
struct MapDatabase {
  Trajectory trajectory;
  std::vector<PointCloud> scans;                  // sensor-frame survey scans
  std::vector<PlaceDescriptorPair> descriptors;
  std::optional<DescriptorIndex> index;
  FingerprintDatabase fingerprints;
  ProjectionConfig projection;
  size_t wifi_n = 32;

  bool has_lidar() const { return index.has_value() && !scans.empty(); }
  bool has_wifi() const { return fingerprints.size() > 0; }
};

struct LocalizationResult {
  RegistrationOutcome registration;
  Pose pose;                       // final estimate from the ICP transform
  FusionResult fusion;
  size_t best_index = 0;
  double delta_theta = 0.0;
  CandidateList lidar_candidates;  // K_l (empty when LiDAR was unusable)
  CandidateList wifi_candidates;   // K_w
  double noise_variance = 0.0;
  bool wifi_ok = false;
};

/// Full pipeline on an already-projected query image (used by the
/// evaluation harness so degradation can be injected between projection
/// and localization). The raw sensor cloud is still needed for ICP.
LocalizationResult localize_from_image(const RangeImage& img, const PointCloud& scan,
                                       const std::vector<ApReading>& raw_wifi,
                                       const MapDatabase& db, const FusionConfig& fusion_cfg,
                                       const IcpParams& icp_params);

/// f(P_t, W_t): project, extract, gate, retrieve, fuse, and register.
/// Throws LocalizationUnavailable or RegistrationFailed on failure.
LocalizationResult global_localize(const PointCloud& scan, const std::vector<ApReading>& raw_wifi,
                                   const MapDatabase& db, const FusionConfig& fusion_cfg,
                                   const IcpParams& icp_params);

}  // namespace floc
