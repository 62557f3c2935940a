#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "stemkit/errors.hpp"

namespace stemkit {

// One emitted mixture/target bundle. Paths are relative to the manifest's
// directory; targets are recorded for active stems only (absent stems are
// silent by definition). `present` is the detection ground truth: active
// stems whose segment stays above the silence threshold.
struct ManifestEntry {
  std::string mixture;
  std::vector<std::pair<std::string, std::string>> targets;
  std::vector<std::string> active_set;
  std::vector<std::string> present;
  std::string clip_id;
  std::size_t segment_index = 0;
  double duration_s = 0.0;
};

struct DatasetManifest {
  int sample_rate = 0;
  double segment_length_s = 0.0;
  std::vector<std::string> labels;
  std::vector<ManifestEntry> entries;
};

// Directory holding the entry's files, relative to the manifest dir.
std::string entry_dir(const ManifestEntry& entry);

// Stable identifier used in reports: the relative entry directory.
std::string entry_id(const ManifestEntry& entry);

bool is_full_set(const ManifestEntry& entry, const DatasetManifest& manifest);

// Checks path uniqueness and that every active_set is a non-empty subset
// of the manifest's label set.
void validate_manifest(const DatasetManifest& manifest);

// Line-delimited JSON: one header line, then one record per entry.
void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace stemkit
