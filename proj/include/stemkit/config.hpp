#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stemkit/loss.hpp"
#include "stemkit/metrics.hpp"
#include "stemkit/powerset.hpp"

namespace stemkit {

struct PathsConfig {
  std::filesystem::path input_dir;
  std::filesystem::path work_dir;
  std::filesystem::path output_dir;
};

// Toolkit-wide configuration. Defaults mirror the six-voice setup:
// six stem labels, 4-second snippets, STFT windows 512/1024/2048, seven mel
// scales (5,32)..(320,2048), weights 1.0/0.7/0.3.
struct RunConfig {
  std::vector<std::string> labels{"Alto",  "Bass",  "Lead Vocal",
                                  "Soprano", "Tenor", "Vocal Percussion"};
  int sample_rate = 0;  // 0 = take from the input data
  AugmentConfig augment;
  LossConfig loss;
  EvalConfig eval;
  std::uint64_t seed = 0;
  PathsConfig paths;
};

void validate_run_config(const RunConfig& cfg);

// JSON round trip; load fills unspecified fields with defaults and rejects
// unknown keys.
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

}  // namespace stemkit
