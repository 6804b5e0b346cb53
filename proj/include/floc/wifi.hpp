#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "floc/descriptor.hpp"
#include "floc/geometry.hpp"

namespace floc {

/// 48-bit MAC in the low bits of a u64. The all-zero address is the
/// padding sentinel and never matches a real AP.
using MacAddress = std::uint64_t;
constexpr MacAddress kSentinelMac = 0;
constexpr double kSentinelRssi = -100.0;

/// Parses "AA:BB:CC:DD:EE:FF"; throws std::invalid_argument on malformed input.
MacAddress parse_mac(const std::string& text);
std::string format_mac(MacAddress mac);

/// One detected AP as reported by the scanner. ssid and channel are
/// carried through storage but unused by the correlation.
struct ApReading {
  MacAddress mac = kSentinelMac;
  double rssi = kSentinelRssi;
  std::string ssid;
  int channel = 1;
};

/// Fixed-size-N scan: deduplicated, sorted by descending RSSI, padded
/// with sentinel entries. RSSIs lie in [-100, 0).
struct WifiScan {
  std::vector<MacAddress> macs;
  std::vector<double> rssis;
  double timestamp = 0.0;

  size_t size() const { return macs.size(); }
  size_t detected_count() const;
};

/// Normalizes a raw reading list to exactly n entries: deduplicate by
/// MAC keeping the strongest, keep the n strongest APs when over-full,
/// pad with (zero MAC, -100 dBm) when under-full.
WifiScan normalize_scan(const std::vector<ApReading>& raw, size_t n, double timestamp = 0.0);

/// Correlation matrix C[i][j] = log2(-S_t[i] - S_k[j]) where the MACs
/// match and neither is the sentinel; 0 otherwise.
Eigen::MatrixXd correlation_matrix(const WifiScan& w_t, const WifiScan& w_k);

/// Sum over all cells, row-major accumulation order.
double correlation_score(const Eigen::MatrixXd& c);

/// Pose-annotated survey of normalized scans, all of size n.
struct FingerprintDatabase {
  std::vector<WifiScan> scans;
  std::vector<Pose> poses;
  size_t n = 0;

  size_t size() const { return scans.size(); }
  void validate() const;
};

/// Indices of the k database scans with the largest correlation sum,
/// best-first; ties break toward the lower trajectory index.
CandidateList query_top_k_wifi(const FingerprintDatabase& db, const WifiScan& w_t, size_t k);

/// Confidence gate: at least min_count detected APs at or above floor_dbm.
bool signal_strength_ok(const WifiScan& w_t, double floor_dbm = -85.0, size_t min_count = 3);

/// JSON lines, one survey sample per line:
/// {"k":i,"pose":{...},"aps":[{"mac","rssi","ssid","channel"},...]}.
/// The stored readings are raw (pre-normalization); loading normalizes
/// them to the given n.
void save_fingerprints(const std::string& path, const std::vector<Pose>& poses,
                       const std::vector<std::vector<ApReading>>& raw_scans);
FingerprintDatabase load_fingerprints(const std::string& path, size_t n);

}  // namespace floc
