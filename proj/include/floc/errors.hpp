#pragma once

#include <stdexcept>
#include <string>

namespace floc {

/// Base class for recoverable pipeline errors. Precondition violations
/// (bad arguments, malformed files) throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A point cloud was empty where at least one point is required.
class EmptyCloudError : public Error {
 public:
  explicit EmptyCloudError(const std::string& what) : Error(what) {}
};

/// The noise estimator cannot produce a trustworthy value (image too
/// small or too sparse). Callers treat the LiDAR channel as degraded.
class UnreliableNoiseEstimate : public Error {
 public:
  explicit UnreliableNoiseEstimate(const std::string& what) : Error(what) {}
};

/// A range image does not cover enough columns to extract descriptors.
class TooSparseImage : public Error {
 public:
  explicit TooSparseImage(const std::string& what) : Error(what) {}
};

/// Both spectra are flat, so no yaw shift can be regressed. Callers
/// fall back to a zero yaw prior.
class YawUnobservable : public Error {
 public:
  explicit YawUnobservable(const std::string& what) : Error(what) {}
};

/// Both sensor channels failed their confidence gates for this sample.
class LocalizationUnavailable : public Error {
 public:
  explicit LocalizationUnavailable(const std::string& what) : Error(what) {}
};

/// ICP could not keep enough inlier correspondences.
class RegistrationFailed : public Error {
 public:
  explicit RegistrationFailed(const std::string& what) : Error(what) {}
};

}  // namespace floc
