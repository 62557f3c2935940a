#pragma once

#include <map>
#include <string>
#include <vector>

#include "stemkit/audio.hpp"
#include "stemkit/spectral.hpp"

namespace stemkit {

// Built-in separators exercising the pipeline without a trained model:
// oracle_targets and ideal_ratio_mask are upper bounds, passthrough and
// zeros are known-answer baselines.
enum class SeparatorKind { oracle_targets, passthrough, zeros, ideal_ratio_mask };

SeparatorKind separator_kind_from_string(const std::string& name);
std::string to_string(SeparatorKind kind);

struct SeparatorSpec {
  SeparatorKind kind = SeparatorKind::oracle_targets;
  SpectralConfig spectral;      // ideal_ratio_mask only; must satisfy COLA
  double mask_exponent = 1.0;   // 1 = magnitude ratio, 2 = Wiener-like
};

// Masks M_i = |S_i|^p / sum_j |S_j|^p over the active references,
// uniform 1/n where the denominator falls below 1e-12. Returned as
// magnitude-kind spectrograms keyed by label.
std::map<std::string, Spectrogram> irm_masks(
    const SeparatorSpec& spec,
    const std::map<std::string, Waveform>& references);

// One estimate per configured label, each the same length as the mixture.
// oracle kinds require references (absent labels default to silence).
std::map<std::string, Waveform> separate(
    const SeparatorSpec& spec, const Waveform& mixture,
    const std::map<std::string, Waveform>* references,
    const std::vector<std::string>& labels);

}  // namespace stemkit
