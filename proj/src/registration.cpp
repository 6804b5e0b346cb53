#include "floc/registration.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "floc/errors.hpp"
#include "floc/kdtree.hpp"

namespace floc {

namespace {
constexpr size_t kMinInlierPairs = 10;
}

void IcpParams::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("IcpParams: max_iterations must be >= 1");
  }
  if (!(convergence_epsilon > 0.0) || !(max_correspondence_distance > 0.0)) {
    throw std::invalid_argument("IcpParams: epsilons must be positive");
  }
  if (min_fitness < 0.0 || min_fitness > 1.0) {
    throw std::invalid_argument("IcpParams: min_fitness must lie in [0,1]");
  }
}

RigidTransform build_prior(const Pose& candidate_pose, double delta_theta) {
  return make_yaw_transform(Pose(candidate_pose.x, candidate_pose.y, candidate_pose.z,
                                 candidate_pose.theta + delta_theta));
}

RegistrationOutcome icp_register(const PointCloud& source, const PointCloud& target,
                                 const RigidTransform& prior, const IcpParams& params) {
  params.validate();
  if (source.size() < kMinInlierPairs || target.size() < kMinInlierPairs) {
    throw RegistrationFailed("icp_register: clouds must contain at least 10 points");
  }

  const KdTree<3> tree(target);
  RegistrationOutcome outcome;
  outcome.transform = prior;

  std::vector<Eigen::Vector3d> moved(source.size());
  std::vector<Eigen::Vector3d> matched;
  std::vector<Eigen::Vector3d> matched_target;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    matched.clear();
    matched_target.clear();
    for (size_t i = 0; i < source.size(); ++i) {
      moved[i] = outcome.transform.rotation * source[i] + outcome.transform.translation;
      const auto nn = tree.nearest(moved[i], 1);
      if (nn.front().distance <= params.max_correspondence_distance) {
        matched.push_back(moved[i]);
        matched_target.push_back(tree.point(nn.front().index));
      }
    }
    if (matched.size() < kMinInlierPairs) {
      throw RegistrationFailed("icp_register: fewer than 10 inlier correspondences");
    }

    // Kabsch: least-squares rigid alignment of matched onto matched_target
    Eigen::Vector3d centroid_src = Eigen::Vector3d::Zero();
    Eigen::Vector3d centroid_tgt = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < matched.size(); ++i) {
      centroid_src += matched[i];
      centroid_tgt += matched_target[i];
    }
    centroid_src /= static_cast<double>(matched.size());
    centroid_tgt /= static_cast<double>(matched.size());

    Eigen::Matrix3d cross = Eigen::Matrix3d::Zero();
    for (size_t i = 0; i < matched.size(); ++i) {
      cross += (matched[i] - centroid_src) * (matched_target[i] - centroid_tgt).transpose();
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d rotation = svd.matrixV() * svd.matrixU().transpose();
    if (rotation.determinant() < 0.0) {
      Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
      flip(2, 2) = -1.0;
      rotation = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    RigidTransform delta;
    delta.rotation = rotation;
    delta.translation = centroid_tgt - rotation * centroid_src;

    outcome.transform = compose(delta, outcome.transform);
    outcome.iterations_used = iter + 1;

    double shift = 0.0;
    double residual = 0.0;
    for (size_t i = 0; i < matched.size(); ++i) {
      const Eigen::Vector3d updated = delta.rotation * matched[i] + delta.translation;
      shift += (updated - matched[i]).norm();
      residual += (matched_target[i] - updated).norm();
    }
    shift /= static_cast<double>(matched.size());
    residual /= static_cast<double>(matched.size());
    outcome.residual_history.push_back(residual);
    outcome.fitness = static_cast<double>(matched.size()) / static_cast<double>(source.size());

    if (shift < params.convergence_epsilon) {
      outcome.converged = true;
      break;
    }
  }

  if (outcome.fitness < params.min_fitness) {
    throw RegistrationFailed("icp_register: final fitness below min_fitness");
  }
  return outcome;
}

LocalizationResult localize_from_image(const RangeImage& img, const PointCloud& scan,
                                       const std::vector<ApReading>& raw_wifi,
                                       const MapDatabase& db, const FusionConfig& fusion_cfg,
                                       const IcpParams& icp_params) {
  fusion_cfg.validate();
  db.trajectory.validate();

  LocalizationResult result;

  std::optional<PlaceDescriptorPair> query_descriptor;
  result.noise_variance = std::numeric_limits<double>::infinity();
  if (db.has_lidar()) {
    try {
      result.noise_variance = estimate_noise_variance(img);
      query_descriptor = extract_descriptors(img);
      result.lidar_candidates = db.index->query_top_k(query_descriptor->q, fusion_cfg.top_k);
    } catch (const UnreliableNoiseEstimate&) {
      result.noise_variance = std::numeric_limits<double>::infinity();
    } catch (const TooSparseImage&) {
      result.noise_variance = std::numeric_limits<double>::infinity();
      query_descriptor.reset();
    }
  }

  WifiScan query_scan;
  if (db.has_wifi()) {
    query_scan = normalize_scan(raw_wifi, db.fingerprints.n);
    result.wifi_ok =
        signal_strength_ok(query_scan, fusion_cfg.rssi_floor, fusion_cfg.rssi_min_count);
    if (result.wifi_ok) {
      result.wifi_candidates = query_top_k_wifi(db.fingerprints, query_scan, fusion_cfg.top_k);
    }
  } else {
    result.wifi_ok = false;
  }

  result.fusion = select_candidates(result.lidar_candidates, result.wifi_candidates,
                                    result.noise_variance, result.wifi_ok, fusion_cfg);
  result.best_index = best_candidate(result.fusion);

  const Pose& candidate_pose = db.trajectory.poses.at(result.best_index);
  result.delta_theta = 0.0;
  if (query_descriptor && result.best_index < db.descriptors.size()) {
    try {
      result.delta_theta =
          estimate_yaw_discrepancy(*query_descriptor, db.descriptors[result.best_index]);
    } catch (const YawUnobservable&) {
      result.delta_theta = 0.0;
    }
  }

  if (db.scans.empty()) {
    throw RegistrationFailed("localize: map database has no stored scans for ICP");
  }
  const RigidTransform prior = build_prior(candidate_pose, result.delta_theta);
  const PointCloud target =
      apply_transform(make_yaw_transform(candidate_pose), db.scans.at(result.best_index));
  result.registration = icp_register(scan, target, prior, icp_params);
  result.pose = pose_from_transform(result.registration.transform);
  return result;
}

LocalizationResult global_localize(const PointCloud& scan, const std::vector<ApReading>& raw_wifi,
                                   const MapDatabase& db, const FusionConfig& fusion_cfg,
                                   const IcpParams& icp_params) {
  const RangeImage img = project_spherical(scan, db.projection);
  return localize_from_image(img, scan, raw_wifi, db, fusion_cfg, icp_params);
}

}  // namespace floc
