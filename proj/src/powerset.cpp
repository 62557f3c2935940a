#include "stemkit/powerset.hpp"

#include <algorithm>
#include <set>

#include "stemkit/metrics.hpp"
#include "stemkit/parallel.hpp"
#include "stemkit/wav.hpp"

namespace stemkit {

namespace fs = std::filesystem;

void validate_augment_config(const AugmentConfig& cfg) {
  if (cfg.labels.empty()) throw ConfigError("augment: empty label set");
  const std::set<std::string> unique(cfg.labels.begin(), cfg.labels.end());
  if (unique.size() != cfg.labels.size())
    throw ConfigError("augment: duplicate labels");
  if (cfg.segment_length_s <= 0.0)
    throw ConfigError("augment: segment length must be positive");
  if (cfg.min_subset_size < 1 ||
      cfg.min_subset_size > static_cast<int>(cfg.labels.size()))
    throw ConfigError("augment: min_subset_size must be in [1, " +
                      std::to_string(cfg.labels.size()) + "]");
}

std::vector<std::vector<std::string>> enumerate_subsets(
    const std::vector<std::string>& labels, int min_size) {
  if (min_size < 1) throw ContractError("enumerate_subsets: min_size >= 1");
  const int n = static_cast<int>(labels.size());
  if (n > 24)
    throw ConfigError("enumerate_subsets: too many labels (" +
                      std::to_string(n) + ") for power-set enumeration");

  std::vector<std::vector<int>> index_sets;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> indices;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) indices.push_back(i);
    if (static_cast<int>(indices.size()) >= min_size)
      index_sets.push_back(std::move(indices));
  }
  std::sort(index_sets.begin(), index_sets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  std::vector<std::vector<std::string>> subsets;
  subsets.reserve(index_sets.size());
  for (const auto& indices : index_sets) {
    std::vector<std::string> subset;
    subset.reserve(indices.size());
    for (const int i : indices)
      subset.push_back(labels[static_cast<std::size_t>(i)]);
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

SubsetMixture mix_subset(const StemClip& clip,
                         const std::vector<std::string>& subset) {
  if (subset.empty()) throw ContractError("mix_subset: empty subset");
  std::set<std::string> active;
  for (const auto& label : subset) {
    if (!clip.has_label(label))
      throw ConfigError("mix_subset: clip '" + clip.clip_id() +
                        "' has no stem '" + label + "'");
    if (!active.insert(label).second)
      throw ConfigError("mix_subset: duplicate label '" + label + "'");
  }

  SubsetMixture out;
  out.source_clip_id = clip.clip_id();
  std::vector<double> mix(clip.length(), 0.0);
  // Sum in clip label order so every subset shares one summation order.
  for (std::size_t i = 0; i < clip.stem_count(); ++i) {
    const std::string& label = clip.labels()[i];
    if (active.count(label) == 0) continue;
    out.active_set.push_back(label);
    const Waveform& stem = clip.stem(i);
    for (std::size_t n = 0; n < mix.size(); ++n) mix[n] += stem.samples[n];
  }
  out.mixture = make_waveform(std::move(mix), clip.sample_rate());
  for (std::size_t i = 0; i < clip.stem_count(); ++i) {
    const std::string& label = clip.labels()[i];
    out.targets.emplace_back(label,
                             active.count(label) > 0
                                 ? clip.stem(i)
                                 : zero_waveform(clip.length(), clip.sample_rate()));
  }
  return out;
}

namespace {

struct ClipOutput {
  std::vector<ManifestEntry> entries;
};

ClipOutput process_clip(const StemClip& clip, const AugmentConfig& cfg,
                        const std::vector<std::vector<std::string>>& subsets,
                        const std::vector<std::string>& abbrevs,
                        const fs::path& out_dir) {
  ClipOutput out;

  // Segment each stem once; mixtures are segmented per subset, so segment
  // boundaries line up across every subset of the clip.
  std::vector<std::vector<Waveform>> stem_segments(clip.stem_count());
  for (std::size_t i = 0; i < clip.stem_count(); ++i)
    stem_segments[i] = segment(clip.stem(i), cfg.segment_length_s, cfg.tail_policy);

  for (const auto& subset : subsets) {
    const SubsetMixture mixed = mix_subset(clip, subset);
    const std::vector<Waveform> mix_segments =
        segment(mixed.mixture, cfg.segment_length_s, cfg.tail_policy);

    std::string tag;
    for (const auto& label : subset) {
      if (!tag.empty()) tag.push_back('-');
      tag += abbrevs[clip.label_index(label)];
    }

    for (std::size_t k = 0; k < mix_segments.size(); ++k) {
      const fs::path rel = fs::path(clip.clip_id()) / tag /
                           ("segment_" + std::to_string(k));
      const fs::path dir = out_dir / rel;
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec)
        throw IoError("cannot create '" + dir.string() + "': " + ec.message());

      ManifestEntry entry;
      entry.clip_id = clip.clip_id();
      entry.segment_index = k;
      entry.active_set = subset;
      entry.duration_s = mix_segments[k].duration_s();
      entry.mixture = (rel / "mixture.wav").generic_string();
      write_wav(dir / "mixture.wav", mix_segments[k], WavEncoding::float32);

      for (const auto& label : subset) {
        const std::size_t idx = clip.label_index(label);
        const Waveform& target_seg = stem_segments[idx][k];
        const std::string file = sanitize_label(label) + ".wav";
        entry.targets.emplace_back(label, (rel / file).generic_string());
        write_wav(dir / file, target_seg, WavEncoding::float32);
        if (rms_dbfs(target_seg) > cfg.silence_threshold_dbfs)
          entry.present.push_back(label);
      }
      out.entries.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace

DatasetManifest augment_dataset(const std::vector<StemClip>& clips,
                                const AugmentConfig& cfg,
                                const fs::path& out_dir) {
  validate_augment_config(cfg);
  if (clips.empty()) throw DataError("augment: no clips found");

  const int sample_rate = clips.front().sample_rate();
  std::set<std::string> ids;
  for (const auto& clip : clips) {
    if (clip.sample_rate() != sample_rate)
      throw ConfigError("augment: clip '" + clip.clip_id() +
                        "' sample rate " + std::to_string(clip.sample_rate()) +
                        " != " + std::to_string(sample_rate));
    if (!ids.insert(clip.clip_id()).second)
      throw DataError("augment: duplicate clip id '" + clip.clip_id() + "'");
    for (const auto& label : cfg.labels)
      if (!clip.has_label(label))
        throw DataError("augment: clip '" + clip.clip_id() +
                        "' is missing stem '" + label + "'");
    if (clip.stem_count() != cfg.labels.size())
      throw DataError("augment: clip '" + clip.clip_id() +
                      "' has stems outside the configured label set");
  }

  const std::vector<std::vector<std::string>> subsets =
      cfg.include_full_set_only
          ? std::vector<std::vector<std::string>>{cfg.labels}
          : enumerate_subsets(cfg.labels, cfg.min_subset_size);
  const std::vector<std::string> abbrevs = label_abbreviations(cfg.labels);

  std::vector<ClipOutput> outputs(clips.size());
  parallel_for(clips.size(), cfg.workers, [&](std::size_t i) {
    outputs[i] = process_clip(clips[i], cfg, subsets, abbrevs, out_dir);
  });

  DatasetManifest manifest;
  manifest.sample_rate = sample_rate;
  manifest.segment_length_s = cfg.segment_length_s;
  manifest.labels = cfg.labels;
  for (auto& output : outputs)
    for (auto& entry : output.entries)
      manifest.entries.push_back(std::move(entry));
  save_manifest(manifest, out_dir / "manifest.jsonl");
  return manifest;
}

}  // namespace stemkit
