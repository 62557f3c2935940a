#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stemkit/config.hpp"
#include "stemkit/loss.hpp"
#include "stemkit/manifest.hpp"
#include "stemkit/separators.hpp"

namespace stemkit {

struct AugmentSummary {
  std::size_t clips = 0;
  std::size_t subsets_per_clip = 0;
  std::size_t entries = 0;
  double total_duration_s = 0.0;
  std::filesystem::path manifest_path;
};

// Reads one subdirectory per clip (one <label>.wav per configured label,
// sanitized filenames) from paths.input_dir and emits the augmented dataset
// under paths.work_dir/dataset.
AugmentSummary cmd_augment(const RunConfig& cfg, int workers = 1);

// Runs a reference separator over every manifest entry, mirroring the
// manifest layout under out_dir.
void cmd_separate(const RunConfig& cfg, const SeparatorSpec& spec,
                  const std::filesystem::path& manifest_path,
                  const std::filesystem::path& out_dir, int workers = 1);

struct EvaluateOutputs {
  std::filesystem::path report_json;
  std::filesystem::path csv_all_stems;
  std::filesystem::path csv_subset;
};

// Scores estimates against the manifest, split into the all-stems
// condition (full active set) and the subset condition (the rest).
EvaluateOutputs cmd_evaluate(const RunConfig& cfg,
                             const std::filesystem::path& manifest_path,
                             const std::filesystem::path& estimates_dir,
                             const std::filesystem::path& out_dir,
                             int workers = 1);

LossBreakdown cmd_loss(const RunConfig& cfg,
                       const std::filesystem::path& estimate_wav,
                       const std::filesystem::path& target_wav);

// Renders an evaluation report JSON as plain-text tables; optionally
// re-emits the per-stem CSVs into csv_dir.
void render_report(const std::filesystem::path& report_json, std::ostream& out,
                   const std::filesystem::path& csv_dir = {});

}  // namespace stemkit
