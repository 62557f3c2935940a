#include "stemkit/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "json.hpp"
#include "stemkit/metrics.hpp"
#include "stemkit/parallel.hpp"
#include "stemkit/powerset.hpp"
#include "stemkit/wav.hpp"

namespace stemkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<StemClip> scan_clips(const RunConfig& cfg) {
  const fs::path input = cfg.paths.input_dir;
  if (input.empty() || !fs::is_directory(input))
    throw DataError("input directory '" + input.string() + "' does not exist");

  std::vector<std::string> clip_ids;
  for (const auto& dir_entry : fs::directory_iterator(input))
    if (dir_entry.is_directory())
      clip_ids.push_back(dir_entry.path().filename().string());
  std::sort(clip_ids.begin(), clip_ids.end());
  if (clip_ids.empty()) throw DataError("no clips found in '" + input.string() + "'");

  std::vector<StemClip> clips;
  clips.reserve(clip_ids.size());
  for (const auto& clip_id : clip_ids) {
    std::vector<Waveform> stems;
    stems.reserve(cfg.labels.size());
    for (const auto& label : cfg.labels) {
      const fs::path wav = input / clip_id / (sanitize_label(label) + ".wav");
      if (!fs::exists(wav))
        throw DataError("clip '" + clip_id + "': missing stem file for label '" +
                        label + "' (expected " + wav.string() + ")");
      stems.push_back(read_wav(wav));
    }
    StemClip clip(clip_id, cfg.labels, std::move(stems));
    if (cfg.sample_rate > 0 && clip.sample_rate() != cfg.sample_rate)
      throw ConfigError("clip '" + clip_id + "' has sample rate " +
                        std::to_string(clip.sample_rate()) +
                        ", config requires " + std::to_string(cfg.sample_rate));
    clips.push_back(std::move(clip));
  }
  return clips;
}

Waveform read_entry_wav(const fs::path& root, const std::string& rel,
                        int expected_rate) {
  const Waveform w = read_wav(root / rel);
  if (w.sample_rate != expected_rate)
    throw DataError("'" + rel + "' has sample rate " +
                    std::to_string(w.sample_rate) + ", manifest says " +
                    std::to_string(expected_rate));
  return w;
}

// Active references only; separators synthesize silence for the rest.
std::map<std::string, Waveform> load_references(const fs::path& manifest_dir,
                                                const ManifestEntry& entry,
                                                int sample_rate) {
  std::map<std::string, Waveform> refs;
  for (const auto& [label, rel] : entry.targets)
    refs.emplace(label, read_entry_wav(manifest_dir, rel, sample_rate));
  return refs;
}

std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json score_to_json(const StemScore& s) {
  json j{{"label", s.label},
         {"reference_present", s.reference_present},
         {"rms_dbfs", s.rms_dbfs},
         {"detected", s.detected}};
  j["si_sdr_db"] = s.si_sdr_db ? json(*s.si_sdr_db) : json(nullptr);
  j["sdri_db"] = s.sdri_db ? json(*s.sdri_db) : json(nullptr);
  return j;
}

json aggregate_to_json(const StemAggregate& a) {
  json j{{"n_active", a.n_active},
         {"n_silent", a.n_silent},
         {"precision", a.detection.precision},
         {"recall", a.detection.recall},
         {"f1", a.detection.f1},
         {"tp", a.detection.tp},
         {"fp", a.detection.fp},
         {"fn", a.detection.fn},
         {"tn", a.detection.tn},
         {"degenerate_detection", a.detection.degenerate}};
  j["mean_sdri_db"] = a.n_active > 0 ? json(a.mean_sdri_db) : json(nullptr);
  j["mean_rms_dbfs"] = a.n_silent > 0 ? json(a.mean_rms_dbfs) : json(nullptr);
  return j;
}

json report_partition_to_json(const EvalReport& report) {
  json per_stem = json::object();
  for (const auto& [label, agg] : report.per_stem)
    per_stem[label] = aggregate_to_json(agg);
  json per_entry = json::array();
  for (const auto& [id, scores] : report.per_entry) {
    json entry{{"id", id}};
    json score_list = json::array();
    for (const auto& s : scores) score_list.push_back(score_to_json(s));
    entry["scores"] = score_list;
    per_entry.push_back(std::move(entry));
  }
  return json{{"n_entries", report.per_entry.size()},
              {"per_stem", per_stem},
              {"per_entry", per_entry}};
}

void write_per_stem_csv(const fs::path& path,
                        const std::vector<std::string>& labels,
                        const EvalReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "label,n_active,mean_sdri_db,n_silent,mean_rms_dbfs,precision,recall,f1\n";
  for (const auto& label : labels) {
    const auto it = report.per_stem.find(label);
    if (it == report.per_stem.end()) continue;
    const StemAggregate& a = it->second;
    out << label << ',' << a.n_active << ','
        << (a.n_active > 0 ? format_fixed(a.mean_sdri_db) : std::string()) << ','
        << a.n_silent << ','
        << (a.n_silent > 0 ? format_fixed(a.mean_rms_dbfs) : std::string()) << ','
        << format_fixed(a.detection.precision) << ','
        << format_fixed(a.detection.recall) << ','
        << format_fixed(a.detection.f1) << '\n';
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

void print_partition_table(std::ostream& out, const std::string& name,
                           const json& partition) {
  out << name << " (" << partition.at("n_entries").get<std::size_t>()
      << " entries)\n";
  out << "  " << std::left << std::setw(20) << "stem" << std::right
      << std::setw(9) << "n_act" << std::setw(14) << "sdri_db" << std::setw(9)
      << "n_sil" << std::setw(14) << "rms_dbfs" << std::setw(8) << "P"
      << std::setw(8) << "R" << std::setw(8) << "F1" << '\n';
  for (const auto& [label, agg] : partition.at("per_stem").items()) {
    char sdri_buf[32] = "-";
    if (!agg.at("mean_sdri_db").is_null())
      std::snprintf(sdri_buf, sizeof(sdri_buf), "%.2f",
                    agg.at("mean_sdri_db").get<double>());
    char rms_buf[32] = "-";
    if (!agg.at("mean_rms_dbfs").is_null())
      std::snprintf(rms_buf, sizeof(rms_buf), "%.2f",
                    agg.at("mean_rms_dbfs").get<double>());
    char p_buf[16], r_buf[16], f_buf[16];
    std::snprintf(p_buf, sizeof(p_buf), "%.3f", agg.at("precision").get<double>());
    std::snprintf(r_buf, sizeof(r_buf), "%.3f", agg.at("recall").get<double>());
    std::snprintf(f_buf, sizeof(f_buf), "%.3f", agg.at("f1").get<double>());
    out << "  " << std::left << std::setw(20) << label << std::right
        << std::setw(9) << agg.at("n_active").get<std::size_t>() << std::setw(14)
        << sdri_buf << std::setw(9) << agg.at("n_silent").get<std::size_t>()
        << std::setw(14) << rms_buf << std::setw(8) << p_buf << std::setw(8)
        << r_buf << std::setw(8) << f_buf << '\n';
  }
}

}  // namespace

AugmentSummary cmd_augment(const RunConfig& cfg, int workers) {
  validate_run_config(cfg);
  const std::vector<StemClip> clips = scan_clips(cfg);

  AugmentConfig augment = cfg.augment;
  augment.labels = cfg.labels;
  augment.workers = workers;
  const fs::path dataset_dir = cfg.paths.work_dir / "dataset";
  std::error_code ec;
  fs::create_directories(dataset_dir, ec);
  if (ec)
    throw IoError("cannot create '" + dataset_dir.string() + "': " + ec.message());

  const DatasetManifest manifest = augment_dataset(clips, augment, dataset_dir);

  AugmentSummary summary;
  summary.clips = clips.size();
  summary.subsets_per_clip =
      augment.include_full_set_only
          ? 1
          : enumerate_subsets(cfg.labels, augment.min_subset_size).size();
  summary.entries = manifest.entries.size();
  for (const auto& e : manifest.entries) summary.total_duration_s += e.duration_s;
  summary.manifest_path = dataset_dir / "manifest.jsonl";
  return summary;
}

void cmd_separate(const RunConfig& cfg, const SeparatorSpec& spec,
                  const fs::path& manifest_path, const fs::path& out_dir,
                  int workers) {
  validate_run_config(cfg);
  const DatasetManifest manifest = load_manifest(manifest_path);
  const fs::path manifest_dir = manifest_path.parent_path();

  parallel_for(manifest.entries.size(), workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    const Waveform mixture =
        read_entry_wav(manifest_dir, entry.mixture, manifest.sample_rate);
    const std::map<std::string, Waveform> refs =
        load_references(manifest_dir, entry, manifest.sample_rate);
    const std::map<std::string, Waveform> estimates =
        separate(spec, mixture, &refs, manifest.labels);

    const fs::path dir = out_dir / entry_dir(entry);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& [label, estimate] : estimates)
      write_wav(dir / (sanitize_label(label) + ".wav"), estimate,
                WavEncoding::float32);
  });
}

EvaluateOutputs cmd_evaluate(const RunConfig& cfg, const fs::path& manifest_path,
                             const fs::path& estimates_dir,
                             const fs::path& out_dir, int workers) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const fs::path manifest_dir = manifest_path.parent_path();

  // Fail fast with a complete list of missing estimate files.
  std::vector<std::string> missing;
  for (const auto& entry : manifest.entries)
    for (const auto& label : manifest.labels) {
      const fs::path wav =
          estimates_dir / entry_dir(entry) / (sanitize_label(label) + ".wav");
      if (!fs::exists(wav)) missing.push_back(wav.string());
    }
  if (!missing.empty()) {
    std::string msg = "missing " + std::to_string(missing.size()) +
                      " estimate file(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 20); ++i)
      msg += "\n  " + missing[i];
    if (missing.size() > 20) msg += "\n  ...";
    throw DataError(msg);
  }

  std::vector<std::pair<std::string, std::vector<StemScore>>> scored(
      manifest.entries.size());
  parallel_for(manifest.entries.size(), workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    EntryData data;
    data.labels = manifest.labels;
    data.mixture =
        read_entry_wav(manifest_dir, entry.mixture, manifest.sample_rate);
    data.references = load_references(manifest_dir, entry, manifest.sample_rate);
    data.present = entry.present;

    std::map<std::string, Waveform> estimates;
    for (const auto& label : manifest.labels) {
      const std::string rel =
          (fs::path(entry_dir(entry)) / (sanitize_label(label) + ".wav"))
              .generic_string();
      Waveform est = read_entry_wav(estimates_dir, rel, manifest.sample_rate);
      if (est.size() != data.mixture.size())
        throw DataError("estimate '" + rel + "' has " +
                        std::to_string(est.size()) + " samples, expected " +
                        std::to_string(data.mixture.size()));
      estimates.emplace(label, std::move(est));
    }
    scored[i] = {entry_id(entry), evaluate_entry(estimates, data, cfg.eval)};
  });

  std::vector<std::pair<std::string, std::vector<StemScore>>> all_scores;
  std::vector<std::pair<std::string, std::vector<StemScore>>> subset_scores;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    if (is_full_set(manifest.entries[i], manifest))
      all_scores.push_back(scored[i]);
    else
      subset_scores.push_back(scored[i]);
  }
  const EvalReport all_report = aggregate_scores(all_scores, manifest.labels);
  const EvalReport subset_report =
      aggregate_scores(subset_scores, manifest.labels);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  EvaluateOutputs outputs;
  outputs.report_json = out_dir / "report.json";
  outputs.csv_all_stems = out_dir / "per_stem_all_stems.csv";
  outputs.csv_subset = out_dir / "per_stem_subset.csv";

  const json report{
      {"config", json::parse(run_config_to_json(cfg))},
      {"manifest", manifest_path.generic_string()},
      {"estimates_dir", estimates_dir.generic_string()},
      {"labels", manifest.labels},
      {"partitions",
       json{{"all_stems", report_partition_to_json(all_report)},
            {"subset", report_partition_to_json(subset_report)}}}};
  std::ofstream out(outputs.report_json, std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + outputs.report_json.string() +
                  "' for writing");
  out << report.dump(2) << '\n';
  out.close();

  write_per_stem_csv(outputs.csv_all_stems, manifest.labels, all_report);
  write_per_stem_csv(outputs.csv_subset, manifest.labels, subset_report);
  return outputs;
}

LossBreakdown cmd_loss(const RunConfig& cfg, const fs::path& estimate_wav,
                       const fs::path& target_wav) {
  validate_run_config(cfg);
  const Waveform estimate = read_wav(estimate_wav);
  const Waveform target = read_wav(target_wav);
  if (estimate.sample_rate != target.sample_rate)
    throw DataError("sample rate mismatch: " +
                    std::to_string(estimate.sample_rate) + " vs " +
                    std::to_string(target.sample_rate));
  if (estimate.size() != target.size())
    throw DataError("length mismatch: " + std::to_string(estimate.size()) +
                    " vs " + std::to_string(target.size()) + " samples");
  return composite_loss(estimate, target, cfg.loss);
}

void render_report(const fs::path& report_json, std::ostream& out,
                   const fs::path& csv_dir) {
  std::ifstream in(report_json);
  if (!in) throw IoError("cannot open report '" + report_json.string() + "'");
  json report;
  try {
    in >> report;
  } catch (const json::exception& ex) {
    throw FormatError("report '" + report_json.string() + "': " + ex.what());
  }

  print_partition_table(out, "all_stems",
                        report.at("partitions").at("all_stems"));
  print_partition_table(out, "subset", report.at("partitions").at("subset"));

  if (!csv_dir.empty()) {
    const std::vector<std::string> labels =
        report.at("labels").get<std::vector<std::string>>();
    for (const std::string name : {"all_stems", "subset"}) {
      const json& partition = report.at("partitions").at(name);
      EvalReport rebuilt;
      for (const auto& [label, agg] : partition.at("per_stem").items()) {
        StemAggregate a;
        a.n_active = agg.at("n_active").get<std::size_t>();
        a.n_silent = agg.at("n_silent").get<std::size_t>();
        if (!agg.at("mean_sdri_db").is_null())
          a.mean_sdri_db = agg.at("mean_sdri_db").get<double>();
        if (!agg.at("mean_rms_dbfs").is_null())
          a.mean_rms_dbfs = agg.at("mean_rms_dbfs").get<double>();
        a.detection.precision = agg.at("precision").get<double>();
        a.detection.recall = agg.at("recall").get<double>();
        a.detection.f1 = agg.at("f1").get<double>();
        rebuilt.per_stem[label] = a;
      }
      std::error_code ec;
      fs::create_directories(csv_dir, ec);
      write_per_stem_csv(csv_dir / ("per_stem_" + name + ".csv"), labels,
                         rebuilt);
    }
  }
}

}  // namespace stemkit
