#include "floc/wifi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace floc {

MacAddress parse_mac(const std::string& text) {
  unsigned int bytes[6];
  char extra = 0;
  const int parsed = std::sscanf(text.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x%c", &bytes[0], &bytes[1],
                                 &bytes[2], &bytes[3], &bytes[4], &bytes[5], &extra);
  if (parsed != 6 || text.size() != 17) {
    throw std::invalid_argument("parse_mac: malformed MAC '" + text + "'");
  }
  MacAddress mac = 0;
  for (unsigned int b : bytes) {
    mac = (mac << 8) | static_cast<MacAddress>(b);
  }
  return mac;
}

std::string format_mac(MacAddress mac) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X",
                static_cast<unsigned>((mac >> 40) & 0xff), static_cast<unsigned>((mac >> 32) & 0xff),
                static_cast<unsigned>((mac >> 24) & 0xff), static_cast<unsigned>((mac >> 16) & 0xff),
                static_cast<unsigned>((mac >> 8) & 0xff), static_cast<unsigned>(mac & 0xff));
  return buf;
}

size_t WifiScan::detected_count() const {
  size_t n = 0;
  for (MacAddress mac : macs) {
    if (mac != kSentinelMac) ++n;
  }
  return n;
}

WifiScan normalize_scan(const std::vector<ApReading>& raw, size_t n, double timestamp) {
  if (n == 0) {
    throw std::invalid_argument("normalize_scan: n must be >= 1");
  }
  // deduplicate by MAC keeping the strongest reading
  std::unordered_map<MacAddress, double> strongest;
  for (const auto& reading : raw) {
    if (reading.mac == kSentinelMac) {
      throw std::invalid_argument("normalize_scan: raw reading with sentinel MAC");
    }
    if (!(reading.rssi >= -100.0 && reading.rssi < 0.0)) {
      throw std::invalid_argument("normalize_scan: RSSI out of [-100, 0)");
    }
    auto [it, inserted] = strongest.emplace(reading.mac, reading.rssi);
    if (!inserted && reading.rssi > it->second) {
      it->second = reading.rssi;
    }
  }
  std::vector<std::pair<MacAddress, double>> entries(strongest.begin(), strongest.end());
  // descending RSSI; MAC breaks exact ties deterministically
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (entries.size() > n) {
    entries.resize(n);  // keep the n strongest
  }
  WifiScan scan;
  scan.timestamp = timestamp;
  scan.macs.reserve(n);
  scan.rssis.reserve(n);
  for (const auto& [mac, rssi] : entries) {
    scan.macs.push_back(mac);
    scan.rssis.push_back(rssi);
  }
  while (scan.macs.size() < n) {
    scan.macs.push_back(kSentinelMac);
    scan.rssis.push_back(kSentinelRssi);
  }
  return scan;
}

Eigen::MatrixXd correlation_matrix(const WifiScan& w_t, const WifiScan& w_k) {
  if (w_t.size() != w_k.size()) {
    throw std::invalid_argument("correlation_matrix: scans normalized to different N");
  }
  const auto n = static_cast<Eigen::Index>(w_t.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (w_t.macs[i] == kSentinelMac) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (w_t.macs[i] != w_k.macs[j]) continue;
      c(i, j) = std::log2(-w_t.rssis[i] - w_k.rssis[j]);
    }
  }
  return c;
}

double correlation_score(const Eigen::MatrixXd& c) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      sum += c(i, j);
    }
  }
  return sum;
}

void FingerprintDatabase::validate() const {
  if (scans.size() != poses.size()) {
    throw std::invalid_argument("FingerprintDatabase: scans/poses length mismatch");
  }
  for (const auto& scan : scans) {
    if (scan.size() != n) {
      throw std::invalid_argument("FingerprintDatabase: scan size differs from N");
    }
  }
}

CandidateList query_top_k_wifi(const FingerprintDatabase& db, const WifiScan& w_t, size_t k) {
  if (db.size() == 0) {
    throw std::invalid_argument("query_top_k_wifi: empty database");
  }
  if (k == 0) {
    throw std::invalid_argument("query_top_k_wifi: k must be >= 1");
  }
  if (w_t.size() != db.n) {
    throw std::invalid_argument("query_top_k_wifi: query N differs from database N");
  }
  std::vector<std::pair<double, size_t>> scored;
  scored.reserve(db.size());
  for (size_t i = 0; i < db.size(); ++i) {
    scored.emplace_back(correlation_score(correlation_matrix(w_t, db.scans[i])), i);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const size_t count = std::min(k, scored.size());
  CandidateList out;
  out.indices.reserve(count);
  out.scores.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.indices.push_back(scored[i].second);
    out.scores.push_back(scored[i].first);
  }
  return out;
}

bool signal_strength_ok(const WifiScan& w_t, double floor_dbm, size_t min_count) {
  size_t count = 0;
  for (size_t i = 0; i < w_t.size(); ++i) {
    if (w_t.macs[i] != kSentinelMac && w_t.rssis[i] >= floor_dbm) ++count;
  }
  return count >= min_count;
}

void save_fingerprints(const std::string& path, const std::vector<Pose>& poses,
                       const std::vector<std::vector<ApReading>>& raw_scans) {
  if (poses.size() != raw_scans.size()) {
    throw std::invalid_argument("save_fingerprints: poses/scans length mismatch");
  }
  std::ofstream os(path);
  if (!os) {
    throw std::invalid_argument("save_fingerprints: cannot open " + path);
  }
  for (size_t i = 0; i < poses.size(); ++i) {
    nlohmann::json aps = nlohmann::json::array();
    for (const auto& reading : raw_scans[i]) {
      aps.push_back({{"mac", format_mac(reading.mac)},
                     {"rssi", reading.rssi},
                     {"ssid", reading.ssid},
                     {"channel", reading.channel}});
    }
    nlohmann::json line = {{"k", i},
                           {"pose",
                            {{"x", poses[i].x},
                             {"y", poses[i].y},
                             {"z", poses[i].z},
                             {"theta", poses[i].theta}}},
                           {"aps", aps}};
    os << line.dump() << "\n";
  }
}

FingerprintDatabase load_fingerprints(const std::string& path, size_t n) {
  std::ifstream is(path);
  if (!is) {
    throw std::invalid_argument("load_fingerprints: cannot open " + path);
  }
  FingerprintDatabase db;
  db.n = n;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.at("k").get<size_t>() != db.scans.size()) {
      throw std::invalid_argument("load_fingerprints: non-contiguous entries in " + path);
    }
    const auto& jp = j.at("pose");
    db.poses.emplace_back(jp.at("x").get<double>(), jp.at("y").get<double>(),
                          jp.at("z").get<double>(), jp.at("theta").get<double>());
    std::vector<ApReading> raw;
    for (const auto& ja : j.at("aps")) {
      ApReading reading;
      reading.mac = parse_mac(ja.at("mac").get<std::string>());
      reading.rssi = ja.at("rssi").get<double>();
      reading.ssid = ja.value("ssid", std::string());
      reading.channel = ja.value("channel", 1);
      raw.push_back(reading);
    }
    db.scans.push_back(normalize_scan(raw, n));
  }
  db.validate();
  return db;
}

}  // namespace floc
