#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stemkit/audio.hpp"
#include "stemkit/manifest.hpp"

namespace stemkit {

struct AugmentConfig {
  std::vector<std::string> labels;
  double segment_length_s = 4.0;
  TailPolicy tail_policy = TailPolicy::drop_tail;
  bool include_full_set_only = false;
  int min_subset_size = 1;
  double silence_threshold_dbfs = -60.0;
  int workers = 1;
};

void validate_augment_config(const AugmentConfig& cfg);

// All subsets of size >= min_size, ordered by size then lexicographically
// by label index. For min_size = 1 the count is 2^n - 1.
std::vector<std::vector<std::string>> enumerate_subsets(
    const std::vector<std::string>& labels, int min_size);

// Elementwise sum of the subset's stems in clip label order; no
// normalization. Targets cover every clip label, zeros when inactive.
SubsetMixture mix_subset(const StemClip& clip,
                         const std::vector<std::string>& subset);

// Mixes every qualifying subset of every clip, segments the results, writes
// float32 WAVs under out_dir/<clip>/<subset_tag>/segment_<k>/ and returns
// the manifest (also saved to out_dir/manifest.jsonl).
DatasetManifest augment_dataset(const std::vector<StemClip>& clips,
                                const AugmentConfig& cfg,
                                const std::filesystem::path& out_dir);

}  // namespace stemkit
