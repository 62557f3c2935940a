#include "stemkit/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace stemkit {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (known.count(key) == 0)
      throw ConfigError("unknown config key '" + where + key + "'");
}

json augment_to_json(const AugmentConfig& a) {
  return json{{"segment_length_s", a.segment_length_s},
              {"tail_policy", to_string(a.tail_policy)},
              {"include_full_set_only", a.include_full_set_only},
              {"min_subset_size", a.min_subset_size},
              {"silence_threshold_dbfs", a.silence_threshold_dbfs}};
}

void augment_from_json(const json& j, AugmentConfig& a) {
  reject_unknown_keys(j,
                      {"segment_length_s", "tail_policy",
                       "include_full_set_only", "min_subset_size",
                       "silence_threshold_dbfs"},
                      "augment.");
  if (j.contains("segment_length_s"))
    a.segment_length_s = j.at("segment_length_s").get<double>();
  if (j.contains("tail_policy"))
    a.tail_policy = tail_policy_from_string(j.at("tail_policy").get<std::string>());
  if (j.contains("include_full_set_only"))
    a.include_full_set_only = j.at("include_full_set_only").get<bool>();
  if (j.contains("min_subset_size"))
    a.min_subset_size = j.at("min_subset_size").get<int>();
  if (j.contains("silence_threshold_dbfs"))
    a.silence_threshold_dbfs = j.at("silence_threshold_dbfs").get<double>();
}

json loss_to_json(const LossConfig& l) {
  json scales = json::array();
  for (const auto& [n_mels, window] : l.mel_scales)
    scales.push_back(json::array({n_mels, window}));
  return json{{"stft_windows", l.stft_windows},
              {"mel_scales", scales},
              {"weight_l1", l.weight_l1},
              {"weight_mel", l.weight_mel},
              {"weight_stft", l.weight_stft},
              {"log_floor", l.log_floor},
              {"mel_fmin", l.mel_fmin},
              {"mel_fmax", l.mel_fmax}};
}

void loss_from_json(const json& j, LossConfig& l) {
  reject_unknown_keys(j,
                      {"stft_windows", "mel_scales", "weight_l1", "weight_mel",
                       "weight_stft", "log_floor", "mel_fmin", "mel_fmax"},
                      "loss.");
  if (j.contains("stft_windows"))
    l.stft_windows = j.at("stft_windows").get<std::vector<int>>();
  if (j.contains("mel_scales")) {
    l.mel_scales.clear();
    for (const auto& pair : j.at("mel_scales")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError("loss.mel_scales entries must be [n_mels, window]");
      l.mel_scales.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
  }
  if (j.contains("weight_l1")) l.weight_l1 = j.at("weight_l1").get<double>();
  if (j.contains("weight_mel")) l.weight_mel = j.at("weight_mel").get<double>();
  if (j.contains("weight_stft")) l.weight_stft = j.at("weight_stft").get<double>();
  if (j.contains("log_floor")) l.log_floor = j.at("log_floor").get<double>();
  if (j.contains("mel_fmin")) l.mel_fmin = j.at("mel_fmin").get<double>();
  if (j.contains("mel_fmax")) l.mel_fmax = j.at("mel_fmax").get<double>();
}

json eval_to_json(const EvalConfig& e) {
  return json{{"si_sdr_cap_db", e.si_sdr_cap_db},
              {"rms_epsilon", e.rms_epsilon},
              {"detection_threshold_dbfs", e.detection_threshold_dbfs}};
}

void eval_from_json(const json& j, EvalConfig& e) {
  reject_unknown_keys(
      j, {"si_sdr_cap_db", "rms_epsilon", "detection_threshold_dbfs"}, "eval.");
  if (j.contains("si_sdr_cap_db"))
    e.si_sdr_cap_db = j.at("si_sdr_cap_db").get<double>();
  if (j.contains("rms_epsilon"))
    e.rms_epsilon = j.at("rms_epsilon").get<double>();
  if (j.contains("detection_threshold_dbfs"))
    e.detection_threshold_dbfs = j.at("detection_threshold_dbfs").get<double>();
}

json paths_to_json(const PathsConfig& p) {
  return json{{"input_dir", p.input_dir.generic_string()},
              {"work_dir", p.work_dir.generic_string()},
              {"output_dir", p.output_dir.generic_string()}};
}

void paths_from_json(const json& j, PathsConfig& p) {
  reject_unknown_keys(j, {"input_dir", "work_dir", "output_dir"}, "paths.");
  if (j.contains("input_dir"))
    p.input_dir = j.at("input_dir").get<std::string>();
  if (j.contains("work_dir")) p.work_dir = j.at("work_dir").get<std::string>();
  if (j.contains("output_dir"))
    p.output_dir = j.at("output_dir").get<std::string>();
}

}  // namespace

void validate_run_config(const RunConfig& cfg) {
  if (cfg.labels.empty()) throw ConfigError("config: empty label set");
  const std::set<std::string> unique(cfg.labels.begin(), cfg.labels.end());
  if (unique.size() != cfg.labels.size())
    throw ConfigError("config: duplicate labels");
  if (cfg.sample_rate < 0)
    throw ConfigError("config: sample_rate must be >= 0");
  AugmentConfig augment = cfg.augment;
  augment.labels = cfg.labels;
  validate_augment_config(augment);
  validate_loss_config(cfg.loss);
  if (cfg.eval.si_sdr_cap_db <= 0.0)
    throw ConfigError("config: si_sdr_cap_db must be positive");
  if (cfg.eval.rms_epsilon <= 0.0)
    throw ConfigError("config: rms_epsilon must be positive");
}

std::string run_config_to_json(const RunConfig& cfg) {
  const json j{{"labels", cfg.labels},
               {"sample_rate", cfg.sample_rate},
               {"seed", cfg.seed},
               {"augment", augment_to_json(cfg.augment)},
               {"loss", loss_to_json(cfg.loss)},
               {"eval", eval_to_json(cfg.eval)},
               {"paths", paths_to_json(cfg.paths)}};
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }
  reject_unknown_keys(
      j, {"labels", "sample_rate", "seed", "augment", "loss", "eval", "paths"},
      "");
  RunConfig cfg;
  try {
    if (j.contains("labels"))
      cfg.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("sample_rate"))
      cfg.sample_rate = j.at("sample_rate").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("augment")) augment_from_json(j.at("augment"), cfg.augment);
    if (j.contains("loss")) loss_from_json(j.at("loss"), cfg.loss);
    if (j.contains("eval")) eval_from_json(j.at("eval"), cfg.eval);
    if (j.contains("paths")) paths_from_json(j.at("paths"), cfg.paths);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config parse error: ") + ex.what());
  }
  cfg.augment.labels = cfg.labels;
  validate_run_config(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return run_config_from_json(text);
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << run_config_to_json(cfg) << '\n';
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace stemkit
