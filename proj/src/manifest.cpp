#include "stemkit/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"

namespace stemkit {

namespace {

using nlohmann::json;

json entry_to_json(const ManifestEntry& e) {
  json targets = json::object();
  for (const auto& [label, path] : e.targets) targets[label] = path;
  return json{{"active_set", e.active_set},
              {"clip_id", e.clip_id},
              {"duration_s", e.duration_s},
              {"mixture", e.mixture},
              {"present", e.present},
              {"segment_index", e.segment_index},
              {"targets", targets}};
}

ManifestEntry entry_from_json(const json& j) {
  ManifestEntry e;
  e.mixture = j.at("mixture").get<std::string>();
  e.active_set = j.at("active_set").get<std::vector<std::string>>();
  e.present = j.at("present").get<std::vector<std::string>>();
  e.clip_id = j.at("clip_id").get<std::string>();
  e.segment_index = j.at("segment_index").get<std::size_t>();
  e.duration_s = j.at("duration_s").get<double>();
  for (const auto& [label, path] : j.at("targets").items())
    e.targets.emplace_back(label, path.get<std::string>());
  std::sort(e.targets.begin(), e.targets.end());
  return e;
}

}  // namespace

std::string entry_dir(const ManifestEntry& entry) {
  return std::filesystem::path(entry.mixture).parent_path().generic_string();
}

std::string entry_id(const ManifestEntry& entry) { return entry_dir(entry); }

bool is_full_set(const ManifestEntry& entry, const DatasetManifest& manifest) {
  return entry.active_set.size() == manifest.labels.size();
}

void validate_manifest(const DatasetManifest& manifest) {
  if (manifest.sample_rate <= 0)
    throw DataError("manifest: sample rate must be positive");
  if (manifest.labels.empty()) throw DataError("manifest: empty label set");
  const std::set<std::string> labels(manifest.labels.begin(),
                                     manifest.labels.end());
  if (labels.size() != manifest.labels.size())
    throw DataError("manifest: duplicate labels");

  std::set<std::string> paths;
  for (const auto& e : manifest.entries) {
    if (e.active_set.empty())
      throw DataError("manifest entry " + e.mixture + ": empty active set");
    for (const auto& label : e.active_set)
      if (labels.count(label) == 0)
        throw DataError("manifest entry " + e.mixture + ": unknown label '" +
                        label + "'");
    for (const auto& label : e.present)
      if (std::find(e.active_set.begin(), e.active_set.end(), label) ==
          e.active_set.end())
        throw DataError("manifest entry " + e.mixture + ": present label '" +
                        label + "' not in active set");
    if (!paths.insert(e.mixture).second)
      throw DataError("manifest: duplicate path " + e.mixture);
    for (const auto& [label, path] : e.targets)
      if (!paths.insert(path).second)
        throw DataError("manifest: duplicate path " + path);
  }
}

void save_manifest(const DatasetManifest& manifest,
                   const std::filesystem::path& path) {
  validate_manifest(manifest);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const json header{{"labels", manifest.labels},
                    {"sample_rate", manifest.sample_rate},
                    {"segment_length_s", manifest.segment_length_s}};
  out << header.dump() << '\n';
  for (const auto& e : manifest.entries) out << entry_to_json(e).dump() << '\n';
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("manifest '" + path.string() + "' is empty");

  DatasetManifest manifest;
  try {
    const json header = json::parse(line);
    manifest.sample_rate = header.at("sample_rate").get<int>();
    manifest.segment_length_s = header.at("segment_length_s").get<double>();
    manifest.labels = header.at("labels").get<std::vector<std::string>>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      manifest.entries.push_back(entry_from_json(json::parse(line)));
    }
  } catch (const json::exception& ex) {
    throw FormatError("manifest '" + path.string() + "': " + ex.what());
  }
  validate_manifest(manifest);
  return manifest;
}

}  // namespace stemkit
