#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "floc/kdtree.hpp"
#include "floc/range_image.hpp"

namespace floc {

constexpr int kDescriptorDim = 64;

/// The 2x64 place descriptor: q is orientation-invariant (L2-normalized
/// spectrum magnitudes |F_1..F_64| of the column depth profile) and is
/// used for retrieval; w holds the complex coefficients F_1..F_32
/// interleaved (Re, Im) and carries the yaw information.
struct PlaceDescriptorPair {
  Eigen::Matrix<double, kDescriptorDim, 1> q;
  Eigen::Matrix<double, kDescriptorDim, 1> w;
  int width = 0;        // column count of the source image
  double dc = 0.0;      // |F_0|, kept for zero-spectrum detection
};

/// Ranked candidate indices into the survey trajectory. Scores are
/// best-first; their meaning depends on the producer (descriptor
/// distance for LiDAR, correlation sum for Wi-Fi).
struct CandidateList {
  std::vector<size_t> indices;
  std::vector<double> scores;

  size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
};

/// Computes the descriptor pair from a range image. Columns without a
/// return take the image's global mean depth. Throws TooSparseImage
/// when fewer than 8 columns contain a return.
PlaceDescriptorPair extract_descriptors(const RangeImage& img);

/// Exact nearest-place index over the q vectors. Entry i corresponds to
/// trajectory index i. Immutable after construction.
class DescriptorIndex {
 public:
  explicit DescriptorIndex(std::vector<PlaceDescriptorPair> pairs);

  size_t size() const { return pairs_.size(); }
  const PlaceDescriptorPair& entry(size_t i) const { return pairs_[i]; }

  /// Top-k entries by Euclidean distance in q space, best-first. Fewer
  /// than k are returned when the index is smaller.
  CandidateList query_top_k(const Eigen::Matrix<double, kDescriptorDim, 1>& q_t, size_t k) const;

 private:
  std::vector<PlaceDescriptorPair> pairs_;
  std::unique_ptr<KdTree<kDescriptorDim>> tree_;
};

inline DescriptorIndex build_index(std::vector<PlaceDescriptorPair> pairs) {
  return DescriptorIndex(std::move(pairs));
}

/// Regresses the yaw discrepancy between the current scan and a map
/// candidate from their w spectra via circular cross-correlation.
/// Returns the angle in (-pi, pi] to add to the candidate's yaw to
/// obtain the current yaw. Throws YawUnobservable on flat spectra.
double estimate_yaw_discrepancy(const PlaceDescriptorPair& current,
                                const PlaceDescriptorPair& candidate);

/// JSON lines {"k":i,"q":[64],"w":[64]}, one entry per trajectory index.
void save_descriptors(const std::string& path, const std::vector<PlaceDescriptorPair>& pairs);
std::vector<PlaceDescriptorPair> load_descriptors(const std::string& path, int width);

}  // namespace floc
