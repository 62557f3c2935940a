#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stemkit/audio.hpp"

namespace stemkit {

struct EvalConfig {
  // Perfect/zero estimates produce infinite SI-SDR; values are capped so
  // aggregation stays finite. The cap is echoed in every report.
  double si_sdr_cap_db = 60.0;
  double rms_epsilon = 1e-12;
  double detection_threshold_dbfs = -60.0;
};

// Scale-invariant SDR in dB, capped to [-cap, +cap]. Throws
// MetricUndefinedError when the reference has zero energy.
double si_sdr(const Waveform& estimate, const Waveform& reference,
              double cap_db = 60.0);

// si_sdr(estimate, reference) - si_sdr(mixture, reference).
double sdri(const Waveform& estimate, const Waveform& reference,
            const Waveform& mixture, double cap_db = 60.0);

// 20*log10(sqrt(mean(x^2) + epsilon)); the epsilon keeps silence finite
// at 20*log10(sqrt(epsilon)) dBFS (-120 dB for the 1e-12 default).
double rms_dbfs(const Waveform& x, double epsilon = 1e-12);

// True iff the estimate's RMS level is strictly above the threshold.
bool detect_stem(const Waveform& estimate, double threshold_dbfs);

struct StemScore {
  std::string label;
  bool reference_present = false;
  std::optional<double> si_sdr_db;
  std::optional<double> sdri_db;
  double rms_dbfs = 0.0;
  bool detected = false;
};

struct DetectionStats {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;  // no positives and no detections
};

DetectionStats count_detections(const std::vector<StemScore>& scores);

// Precision/recall/F1 with reference_present as ground truth. Grouped per
// label when per_label is true, otherwise a single entry under "all".
std::map<std::string, DetectionStats> detection_f1(
    const std::vector<StemScore>& scores, bool per_label);

// References and ground truth for one manifest entry, fully loaded.
struct EntryData {
  std::vector<std::string> labels;
  Waveform mixture;
  std::map<std::string, Waveform> references;  // zeros for absent stems
  std::vector<std::string> present;            // detection ground truth
};

// Dual-metric rule: stems with a present reference get SI-SDR/SDRi plus the
// silence metrics; silent stems get RMS-dBFS and detection only.
std::vector<StemScore> evaluate_entry(
    const std::map<std::string, Waveform>& estimates, const EntryData& entry,
    const EvalConfig& cfg);

struct StemAggregate {
  std::size_t n_active = 0;
  double mean_sdri_db = 0.0;  // meaningful only when n_active > 0
  std::size_t n_silent = 0;
  double mean_rms_dbfs = 0.0;  // meaningful only when n_silent > 0
  DetectionStats detection;
};

struct EvalReport {
  std::vector<std::pair<std::string, std::vector<StemScore>>> per_entry;
  std::map<std::string, StemAggregate> per_stem;
};

// Aggregates means over the entries where each metric is defined.
EvalReport aggregate_scores(
    const std::vector<std::pair<std::string, std::vector<StemScore>>>& scored,
    const std::vector<std::string>& labels);

}  // namespace stemkit
