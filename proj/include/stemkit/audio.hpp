#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stemkit/errors.hpp"

namespace stemkit {

// Mono sample sequence at a fixed rate. Samples are nominally in [-1, 1]
// full scale; values outside that range are legal (unnormalized mixtures).
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Validates sample_rate > 0.
Waveform make_waveform(std::vector<double> samples, int sample_rate);

Waveform zero_waveform(std::size_t length, int sample_rate);

enum class TailPolicy { drop_tail, pad_tail };

TailPolicy tail_policy_from_string(const std::string& name);
std::string to_string(TailPolicy policy);

// Splits w into snippets of exactly round(seconds * sample_rate) samples.
// drop_tail discards a trailing partial snippet; pad_tail zero-pads it.
std::vector<Waveform> segment(const Waveform& w, double seconds,
                              TailPolicy policy);

// A named clip holding one stem waveform per label. All stems share the
// same sample rate and length; labels are unique. Enforced at construction.
class StemClip {
 public:
  StemClip(std::string clip_id, std::vector<std::string> labels,
           std::vector<Waveform> stems);

  const std::string& clip_id() const { return clip_id_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t stem_count() const { return labels_.size(); }
  std::size_t length() const;
  int sample_rate() const;

  bool has_label(const std::string& label) const;
  std::size_t label_index(const std::string& label) const;
  const Waveform& stem(std::size_t index) const;
  const Waveform& stem(const std::string& label) const;

 private:
  std::string clip_id_;
  std::vector<std::string> labels_;
  std::vector<Waveform> stems_;
};

// A mixture plus the subset of stems that produced it. Targets cover every
// clip label; labels outside active_set carry all-zero waveforms.
struct SubsetMixture {
  std::string source_clip_id;
  std::size_t segment_index = 0;
  std::vector<std::string> active_set;
  Waveform mixture;
  std::vector<std::pair<std::string, Waveform>> targets;

  const Waveform& target(const std::string& label) const;
};

// Filesystem-safe stem name: lowercased, non-alphanumerics collapsed to '_'.
std::string sanitize_label(const std::string& label);

// Short tags for subset directory names: initials of each word, falling
// back to sanitized labels if the initials collide within the set.
std::vector<std::string> label_abbreviations(
    const std::vector<std::string>& labels);

}  // namespace stemkit
