#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcconf/metrics.hpp"

namespace hcconf {

/// One case of a manifest CSV. Directories are resolved against the
/// manifest's own directory when relative.
struct ManifestRow {
  std::string case_id;
  double pixel_size_mm = 0.0;
  double gt_cx = 0.0, gt_cy = 0.0, gt_a = 0.0, gt_b = 0.0;
  double gt_theta = 0.0;  // canonicalised into [0, pi) at load
  std::filesystem::path masks_dir;
  std::optional<std::filesystem::path> soft_dir;

  GroundTruth ground_truth() const;
};

inline constexpr const char* kManifestColumns[] = {"case_id", "pixel_size_mm", "gt_cx",
                                                   "gt_cy",   "gt_a",          "gt_b",
                                                   "gt_theta", "masks_dir",    "soft_dir"};

/// Throws IoError, MissingColumn, BadNumber or EmptyManifest. Unknown columns are ignored.
std::vector<ManifestRow> parse_manifest(const std::filesystem::path& path);

/// Writes directories relative to the manifest location when they lie beneath it.
void write_manifest(const std::vector<ManifestRow>& rows, const std::filesystem::path& path);

}  // namespace hcconf
