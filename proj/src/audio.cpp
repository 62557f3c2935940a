#include "stemkit/audio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace stemkit {

Waveform make_waveform(std::vector<double> samples, int sample_rate) {
  if (sample_rate <= 0)
    throw ContractError("waveform sample rate must be positive, got " +
                        std::to_string(sample_rate));
  return Waveform{std::move(samples), sample_rate};
}

Waveform zero_waveform(std::size_t length, int sample_rate) {
  return make_waveform(std::vector<double>(length, 0.0), sample_rate);
}

TailPolicy tail_policy_from_string(const std::string& name) {
  if (name == "drop_tail") return TailPolicy::drop_tail;
  if (name == "pad_tail") return TailPolicy::pad_tail;
  throw ConfigError("unknown tail policy '" + name +
                    "' (expected drop_tail or pad_tail)");
}

std::string to_string(TailPolicy policy) {
  return policy == TailPolicy::drop_tail ? "drop_tail" : "pad_tail";
}

std::vector<Waveform> segment(const Waveform& w, double seconds,
                              TailPolicy policy) {
  if (seconds <= 0.0)
    throw ConfigError("segment length must be positive, got " +
                      std::to_string(seconds));
  if (w.sample_rate <= 0)
    throw ContractError("cannot segment a waveform without a sample rate");
  const auto seg_len =
      static_cast<std::size_t>(std::llround(seconds * w.sample_rate));
  if (seg_len == 0)
    throw ConfigError("segment length rounds to zero samples at " +
                      std::to_string(w.sample_rate) + " Hz");

  const std::size_t n = w.size();
  const std::size_t count = policy == TailPolicy::drop_tail
                                ? n / seg_len
                                : (n + seg_len - 1) / seg_len;
  std::vector<Waveform> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> chunk(seg_len, 0.0);
    const std::size_t begin = i * seg_len;
    const std::size_t avail = std::min(seg_len, n - begin);
    std::copy_n(w.samples.begin() + static_cast<std::ptrdiff_t>(begin), avail,
                chunk.begin());
    out.push_back(Waveform{std::move(chunk), w.sample_rate});
  }
  return out;
}

StemClip::StemClip(std::string clip_id, std::vector<std::string> labels,
                   std::vector<Waveform> stems)
    : clip_id_(std::move(clip_id)),
      labels_(std::move(labels)),
      stems_(std::move(stems)) {
  if (labels_.empty())
    throw DataError("clip '" + clip_id_ + "' has no stems");
  if (labels_.size() != stems_.size())
    throw ContractError("clip '" + clip_id_ + "': " +
                        std::to_string(labels_.size()) + " labels but " +
                        std::to_string(stems_.size()) + " waveforms");
  std::set<std::string> seen;
  for (const auto& label : labels_)
    if (!seen.insert(label).second)
      throw DataError("clip '" + clip_id_ + "': duplicate stem label '" +
                      label + "'");
  const int rate = stems_.front().sample_rate;
  const std::size_t len = stems_.front().size();
  if (rate <= 0)
    throw DataError("clip '" + clip_id_ + "': invalid sample rate");
  for (std::size_t i = 0; i < stems_.size(); ++i) {
    if (stems_[i].sample_rate != rate)
      throw DataError("clip '" + clip_id_ + "': stem '" + labels_[i] +
                      "' sample rate " + std::to_string(stems_[i].sample_rate) +
                      " != " + std::to_string(rate));
    if (stems_[i].size() != len)
      throw DataError("clip '" + clip_id_ + "': stem '" + labels_[i] +
                      "' length " + std::to_string(stems_[i].size()) +
                      " != " + std::to_string(len));
  }
}

std::size_t StemClip::length() const { return stems_.front().size(); }

int StemClip::sample_rate() const { return stems_.front().sample_rate; }

bool StemClip::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t StemClip::label_index(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw ContractError("clip '" + clip_id_ + "' has no stem '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

const Waveform& StemClip::stem(std::size_t index) const {
  if (index >= stems_.size())
    throw ContractError("stem index " + std::to_string(index) +
                        " out of range");
  return stems_[index];
}

const Waveform& StemClip::stem(const std::string& label) const {
  return stems_[label_index(label)];
}

const Waveform& SubsetMixture::target(const std::string& label) const {
  for (const auto& [name, wave] : targets)
    if (name == label) return wave;
  throw ContractError("subset mixture has no target for '" + label + "'");
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  out.reserve(label.size());
  bool last_was_sep = false;
  for (const char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
      last_was_sep = false;
    } else if (!out.empty() && !last_was_sep) {
      out.push_back('_');
      last_was_sep = true;
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  if (out.empty()) throw ConfigError("label '" + label + "' sanitizes to nothing");
  return out;
}

std::vector<std::string> label_abbreviations(
    const std::vector<std::string>& labels) {
  std::vector<std::string> abbrevs;
  abbrevs.reserve(labels.size());
  for (const auto& label : labels) {
    std::string tag;
    bool word_start = true;
    for (const char ch : label) {
      if (std::isalnum(static_cast<unsigned char>(ch))) {
        if (word_start)
          tag.push_back(
              static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        word_start = false;
      } else {
        word_start = true;
      }
    }
    abbrevs.push_back(tag);
  }
  std::set<std::string> unique(abbrevs.begin(), abbrevs.end());
  if (unique.size() != abbrevs.size() ||
      unique.count(std::string()) > 0) {
    // Initials collide; fall back to full sanitized labels for all tags.
    abbrevs.clear();
    for (const auto& label : labels) abbrevs.push_back(sanitize_label(label));
  }
  return abbrevs;
}

}  // namespace stemkit
