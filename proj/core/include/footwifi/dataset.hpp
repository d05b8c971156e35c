#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "footwifi/types.hpp"

namespace footwifi {

struct TruthSample {
  double t = 0.0;
  Position position;

  friend bool operator==(const TruthSample&, const TruthSample&) = default;
};

/// A dataset directory holds three JSONL files, one record per line:
///   steps.jsonl  {"t":s,"dl":m,"dtheta":rad}
///   scans.jsonl  {"t":s,"readings":[{"ap":"id","rss":dbm},...]}
///   truth.jsonl  {"t":s,"x":m,"y":m}          (optional)
/// truth.jsonl, when present, has one record per epoch: the start pose
/// followed by the pose after every step.
struct Dataset {
  std::vector<StepMeasurement> steps;
  std::vector<RssVector> scans;
  std::optional<std::vector<TruthSample>> truth;
  std::vector<std::string> warnings;  // e.g. clamped RSS values
};

inline constexpr const char* kStepsFile = "steps.jsonl";
inline constexpr const char* kScansFile = "scans.jsonl";
inline constexpr const char* kTruthFile = "truth.jsonl";

/// Parses and validates a dataset directory. Throws std::runtime_error with
/// "<file>:<line>: ..." on malformed records, negative step length,
/// non-monotone timestamps, duplicate AP ids or RSS above 0 dBm. RSS below
/// -110 dBm is clamped and reported in `warnings`.
Dataset load_dataset(const std::filesystem::path& dir);

/// Writes the canonical form. Creates `dir` if needed.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);

/// Canonical single-line encodings (no trailing newline).
std::string encode_step(const StepMeasurement& s);
std::string encode_scan(const RssVector& scan);
std::string encode_truth(const TruthSample& t);

}  // namespace footwifi
