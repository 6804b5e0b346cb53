#include "floc/descriptor.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <stdexcept>

#include "floc/errors.hpp"
#include "floc/geometry.hpp"
#include "json.hpp"

namespace floc {

namespace {

constexpr int kYawCoefficients = kDescriptorDim / 2;  // 32 complex terms in w

/// Mean finite depth per column; empty columns get the global mean.
std::vector<double> column_profile(const RangeImage& img) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> profile(w, 0.0);
  std::vector<int> counts(w, 0);
  double global_sum = 0.0;
  size_t global_count = 0;
  for (int c = 0; c < w; ++c) {
    double sum = 0.0;
    int count = 0;
    for (int r = 0; r < h; ++r) {
      if (!img.has_return(r, c)) continue;
      sum += img.at(r, c);
      ++count;
    }
    profile[c] = sum;
    counts[c] = count;
    global_sum += sum;
    global_count += count;
  }
  int populated = 0;
  for (int c = 0; c < w; ++c) {
    if (counts[c] > 0) ++populated;
  }
  if (populated < 8) {
    throw TooSparseImage("extract_descriptors: fewer than 8 populated columns");
  }
  const double global_mean = global_sum / static_cast<double>(global_count);
  for (int c = 0; c < w; ++c) {
    profile[c] = counts[c] > 0 ? profile[c] / counts[c] : global_mean;
  }
  return profile;
}

/// DFT coefficient F_k = sum_j c[j] * exp(+2*pi*i*j*k/W).
std::complex<double> dft_coefficient(const std::vector<double>& profile, int k) {
  const int w = static_cast<int>(profile.size());
  const double step = 2.0 * kPi * k / w;
  const std::complex<double> twiddle(std::cos(step), std::sin(step));
  std::complex<double> phase(1.0, 0.0);
  std::complex<double> acc(0.0, 0.0);
  for (int j = 0; j < w; ++j) {
    acc += profile[j] * phase;
    phase *= twiddle;
  }
  return acc;
}

std::complex<double> w_coefficient(const PlaceDescriptorPair& pair, int k) {
  return {pair.w[2 * k], pair.w[2 * k + 1]};
}

}  // namespace

PlaceDescriptorPair extract_descriptors(const RangeImage& img) {
  const int w = img.width();
  if (w < kDescriptorDim + 1) {
    throw std::invalid_argument("extract_descriptors: image width must exceed 64 columns");
  }
  const std::vector<double> profile = column_profile(img);

  PlaceDescriptorPair pair;
  pair.width = w;
  double dc = 0.0;
  for (double v : profile) dc += v;
  pair.dc = std::abs(dc);

  for (int k = 1; k <= kDescriptorDim; ++k) {
    const std::complex<double> f = dft_coefficient(profile, k);
    pair.q[k - 1] = std::abs(f);
    if (k <= kYawCoefficients) {
      pair.w[2 * (k - 1)] = f.real();
      pair.w[2 * (k - 1) + 1] = f.imag();
    }
  }

  const double norm = pair.q.norm();
  if (norm <= 1e-12 * std::max(1.0, pair.dc)) {
    // flat profile: spectrum carries no place information, fall back to
    // a fixed unit vector so ||q|| = 1 still holds
    pair.q.setZero();
    pair.q[0] = 1.0;
    pair.w.setZero();
  } else {
    pair.q /= norm;
  }
  return pair;
}

DescriptorIndex::DescriptorIndex(std::vector<PlaceDescriptorPair> pairs)
    : pairs_(std::move(pairs)) {
  if (pairs_.empty()) {
    throw std::invalid_argument("DescriptorIndex: empty descriptor list");
  }
  std::vector<Eigen::Matrix<double, kDescriptorDim, 1>> points;
  points.reserve(pairs_.size());
  for (const auto& p : pairs_) {
    points.push_back(p.q);
  }
  tree_ = std::make_unique<KdTree<kDescriptorDim>>(std::move(points));
}

CandidateList DescriptorIndex::query_top_k(const Eigen::Matrix<double, kDescriptorDim, 1>& q_t,
                                           size_t k) const {
  if (k == 0) {
    throw std::invalid_argument("query_top_k: k must be >= 1");
  }
  const auto neighbors = tree_->nearest(q_t, k);
  CandidateList out;
  out.indices.reserve(neighbors.size());
  out.scores.reserve(neighbors.size());
  for (const auto& n : neighbors) {
    out.indices.push_back(n.index);
    out.scores.push_back(n.distance);
  }
  return out;
}

double estimate_yaw_discrepancy(const PlaceDescriptorPair& current,
                                const PlaceDescriptorPair& candidate) {
  if (current.width != candidate.width || current.width <= 0) {
    throw std::invalid_argument("estimate_yaw_discrepancy: descriptors from different configs");
  }
  const double scale_t = std::max(1.0, current.dc);
  const double scale_i = std::max(1.0, candidate.dc);
  if (current.w.norm() <= 1e-12 * scale_t || candidate.w.norm() <= 1e-12 * scale_i) {
    throw YawUnobservable("estimate_yaw_discrepancy: flat spectrum");
  }

  const int w = current.width;
  // cross-power terms F_t,k * conj(F_i,k)
  std::vector<std::complex<double>> cross(kYawCoefficients);
  for (int k = 0; k < kYawCoefficients; ++k) {
    cross[k] = w_coefficient(current, k) * std::conj(w_coefficient(candidate, k));
  }
  int best_shift = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < w; ++s) {
    double value = 0.0;
    for (int k = 0; k < kYawCoefficients; ++k) {
      const double phase = 2.0 * kPi * (k + 1) * s / w;
      value += cross[k].real() * std::cos(phase) - cross[k].imag() * std::sin(phase);
    }
    if (value > best_value) {
      best_value = value;
      best_shift = s;
    }
  }
  if (best_shift > w / 2) {
    best_shift -= w;
  }
  return wrap_angle(best_shift * 2.0 * kPi / w);
}

void save_descriptors(const std::string& path, const std::vector<PlaceDescriptorPair>& pairs) {
  std::ofstream os(path);
  if (!os) {
    throw std::invalid_argument("save_descriptors: cannot open " + path);
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    nlohmann::json line;
    line["k"] = i;
    line["q"] = std::vector<double>(pairs[i].q.data(), pairs[i].q.data() + kDescriptorDim);
    line["w"] = std::vector<double>(pairs[i].w.data(), pairs[i].w.data() + kDescriptorDim);
    os << line.dump() << "\n";
  }
}

std::vector<PlaceDescriptorPair> load_descriptors(const std::string& path, int width) {
  std::ifstream is(path);
  if (!is) {
    throw std::invalid_argument("load_descriptors: cannot open " + path);
  }
  std::vector<PlaceDescriptorPair> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.at("k").get<size_t>() != pairs.size()) {
      throw std::invalid_argument("load_descriptors: non-contiguous entries in " + path);
    }
    const auto q = j.at("q").get<std::vector<double>>();
    const auto wv = j.at("w").get<std::vector<double>>();
    if (q.size() != kDescriptorDim || wv.size() != kDescriptorDim) {
      throw std::invalid_argument("load_descriptors: bad vector size in " + path);
    }
    PlaceDescriptorPair pair;
    pair.width = width;
    for (int d = 0; d < kDescriptorDim; ++d) {
      pair.q[d] = q[d];
      pair.w[d] = wv[d];
    }
    // recover |F_0| proxy for zero-spectrum detection after a round trip
    pair.dc = std::max(1.0, pair.w.norm());
    pairs.push_back(pair);
  }
  return pairs;
}

}  // namespace floc
