#include "stemkit/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace stemkit {

namespace {

void check_pair(const Waveform& a, const Waveform& b, const char* what) {
  if (a.size() != b.size())
    throw ContractError(std::string(what) + ": length mismatch (" +
                        std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  if (a.sample_rate != b.sample_rate)
    throw ContractError(std::string(what) + ": sample rate mismatch (" +
                        std::to_string(a.sample_rate) + " vs " +
                        std::to_string(b.sample_rate) + ")");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

double si_sdr(const Waveform& estimate, const Waveform& reference,
              double cap_db) {
  check_pair(estimate, reference, "si_sdr");
  if (estimate.empty()) throw ContractError("si_sdr: empty signals");

  const double ref_energy = dot(reference.samples, reference.samples);
  if (ref_energy <= 0.0)
    throw MetricUndefinedError(
        "si_sdr is undefined for a zero-energy reference");

  // Projection of the estimate onto the reference: alpha = <e,s>/<s,s>.
  const double alpha = dot(estimate.samples, reference.samples) / ref_energy;
  const double target_energy = alpha * alpha * ref_energy;
  if (target_energy <= 0.0) return -cap_db;  // zero or orthogonal estimate

  double residual = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = alpha * reference.samples[i] - estimate.samples[i];
    residual += d * d;
  }
  if (residual <= 0.0) return cap_db;
  const double db = 10.0 * std::log10(target_energy / residual);
  return std::clamp(db, -cap_db, cap_db);
}

double sdri(const Waveform& estimate, const Waveform& reference,
            const Waveform& mixture, double cap_db) {
  check_pair(estimate, mixture, "sdri");
  return si_sdr(estimate, reference, cap_db) -
         si_sdr(mixture, reference, cap_db);
}

double rms_dbfs(const Waveform& x, double epsilon) {
  if (x.empty()) throw ContractError("rms_dbfs requires a non-empty signal");
  double acc = 0.0;
  for (const double s : x.samples) acc += s * s;
  const double mean_square = acc / static_cast<double>(x.size());
  return 20.0 * std::log10(std::sqrt(mean_square + epsilon));
}

bool detect_stem(const Waveform& estimate, double threshold_dbfs) {
  return rms_dbfs(estimate) > threshold_dbfs;
}

DetectionStats count_detections(const std::vector<StemScore>& scores) {
  DetectionStats st;
  for (const auto& s : scores) {
    if (s.detected && s.reference_present) ++st.tp;
    else if (s.detected && !s.reference_present) ++st.fp;
    else if (!s.detected && s.reference_present) ++st.fn;
    else ++st.tn;
  }
  st.precision = st.tp + st.fp > 0
                     ? static_cast<double>(st.tp) / static_cast<double>(st.tp + st.fp)
                     : 0.0;
  st.recall = st.tp + st.fn > 0
                  ? static_cast<double>(st.tp) / static_cast<double>(st.tp + st.fn)
                  : 0.0;
  st.f1 = st.precision + st.recall > 0.0
              ? 2.0 * st.precision * st.recall / (st.precision + st.recall)
              : 0.0;
  st.degenerate = (st.tp + st.fn == 0) && (st.tp + st.fp == 0);
  return st;
}

std::map<std::string, DetectionStats> detection_f1(
    const std::vector<StemScore>& scores, bool per_label) {
  std::map<std::string, std::vector<StemScore>> groups;
  for (const auto& s : scores)
    groups[per_label ? s.label : std::string("all")].push_back(s);
  std::map<std::string, DetectionStats> out;
  for (const auto& [key, group] : groups) out[key] = count_detections(group);
  return out;
}

std::vector<StemScore> evaluate_entry(
    const std::map<std::string, Waveform>& estimates, const EntryData& entry,
    const EvalConfig& cfg) {
  std::vector<StemScore> scores;
  scores.reserve(entry.labels.size());
  for (const auto& label : entry.labels) {
    const auto est_it = estimates.find(label);
    if (est_it == estimates.end())
      throw ContractError("no estimate supplied for stem '" + label + "'");
    const Waveform& est = est_it->second;
    if (est.size() != entry.mixture.size())
      throw ContractError("estimate for stem '" + label + "' has length " +
                          std::to_string(est.size()) + ", expected " +
                          std::to_string(entry.mixture.size()));

    StemScore score;
    score.label = label;
    score.reference_present =
        std::find(entry.present.begin(), entry.present.end(), label) !=
        entry.present.end();
    score.rms_dbfs = rms_dbfs(est, cfg.rms_epsilon);
    score.detected = score.rms_dbfs > cfg.detection_threshold_dbfs;
    if (score.reference_present) {
      const auto ref_it = entry.references.find(label);
      if (ref_it == entry.references.end())
        throw ContractError("no reference loaded for present stem '" + label +
                            "'");
      score.si_sdr_db = si_sdr(est, ref_it->second, cfg.si_sdr_cap_db);
      score.sdri_db =
          *score.si_sdr_db - si_sdr(entry.mixture, ref_it->second, cfg.si_sdr_cap_db);
    }
    scores.push_back(std::move(score));
  }
  return scores;
}

EvalReport aggregate_scores(
    const std::vector<std::pair<std::string, std::vector<StemScore>>>& scored,
    const std::vector<std::string>& labels) {
  EvalReport report;
  report.per_entry = scored;

  std::map<std::string, std::vector<StemScore>> per_label;
  for (const auto& label : labels) per_label[label];  // keep all labels present
  for (const auto& [id, scores] : scored)
    for (const auto& s : scores) per_label[s.label].push_back(s);

  for (const auto& [label, scores] : per_label) {
    StemAggregate agg;
    double sdri_sum = 0.0;
    double rms_sum = 0.0;
    for (const auto& s : scores) {
      if (s.reference_present && s.sdri_db) {
        ++agg.n_active;
        sdri_sum += *s.sdri_db;
      } else if (!s.reference_present) {
        ++agg.n_silent;
        rms_sum += s.rms_dbfs;
      }
    }
    if (agg.n_active > 0)
      agg.mean_sdri_db = sdri_sum / static_cast<double>(agg.n_active);
    if (agg.n_silent > 0)
      agg.mean_rms_dbfs = rms_sum / static_cast<double>(agg.n_silent);
    agg.detection = count_detections(scores);
    report.per_stem[label] = agg;
  }
  return report;
}

}  // namespace stemkit
