#include "stemkit/separators.hpp"

#include <cmath>

namespace stemkit {

namespace {

constexpr double kMaskFloor = 1e-12;

void require_references(const std::map<std::string, Waveform>* references,
                        SeparatorKind kind) {
  if (references == nullptr)
    throw ContractError("separator '" + to_string(kind) +
                        "' requires reference stems");
}

}  // namespace

SeparatorKind separator_kind_from_string(const std::string& name) {
  if (name == "oracle_targets" || name == "oracle")
    return SeparatorKind::oracle_targets;
  if (name == "passthrough") return SeparatorKind::passthrough;
  if (name == "zeros") return SeparatorKind::zeros;
  if (name == "ideal_ratio_mask" || name == "irm")
    return SeparatorKind::ideal_ratio_mask;
  throw ConfigError("unknown separator kind '" + name + "'");
}

std::string to_string(SeparatorKind kind) {
  switch (kind) {
    case SeparatorKind::oracle_targets: return "oracle_targets";
    case SeparatorKind::passthrough: return "passthrough";
    case SeparatorKind::zeros: return "zeros";
    case SeparatorKind::ideal_ratio_mask: return "ideal_ratio_mask";
  }
  return "?";
}

std::map<std::string, Spectrogram> irm_masks(
    const SeparatorSpec& spec,
    const std::map<std::string, Waveform>& references) {
  if (spec.mask_exponent <= 0.0)
    throw ConfigError("mask exponent must be positive");
  if (references.empty())
    throw ContractError("irm_masks requires at least one reference");

  std::map<std::string, Spectrogram> mags;
  for (const auto& [label, ref] : references)
    mags.emplace(label, magnitude(stft(ref, spec.spectral)));

  const Spectrogram& first = mags.begin()->second;
  const std::size_t cells = first.rdata.size();
  const double p = spec.mask_exponent;
  const double uniform = 1.0 / static_cast<double>(references.size());

  std::vector<double> denom(cells, 0.0);
  for (auto& [label, mag] : mags) {
    if (mag.rdata.size() != cells)
      throw ContractError("reference spectrogram shapes differ");
    for (std::size_t i = 0; i < cells; ++i) {
      mag.rdata[i] = p == 1.0 ? mag.rdata[i] : std::pow(mag.rdata[i], p);
      denom[i] += mag.rdata[i];
    }
  }

  // Silent cells get a uniform mask so the masks always sum to one.
  for (auto& [label, mag] : mags) {
    mag.kind = SpectrogramKind::magnitude;
    for (std::size_t i = 0; i < cells; ++i)
      mag.rdata[i] = denom[i] > kMaskFloor ? mag.rdata[i] / denom[i] : uniform;
  }
  return mags;
}

std::map<std::string, Waveform> separate(
    const SeparatorSpec& spec, const Waveform& mixture,
    const std::map<std::string, Waveform>* references,
    const std::vector<std::string>& labels) {
  if (labels.empty()) throw ContractError("separate: empty label set");
  std::map<std::string, Waveform> out;

  switch (spec.kind) {
    case SeparatorKind::passthrough:
      for (const auto& label : labels) out.emplace(label, mixture);
      return out;

    case SeparatorKind::zeros:
      for (const auto& label : labels)
        out.emplace(label, zero_waveform(mixture.size(), mixture.sample_rate));
      return out;

    case SeparatorKind::oracle_targets: {
      require_references(references, spec.kind);
      for (const auto& label : labels) {
        const auto it = references->find(label);
        if (it == references->end()) {
          out.emplace(label,
                      zero_waveform(mixture.size(), mixture.sample_rate));
          continue;
        }
        if (it->second.size() != mixture.size())
          throw ContractError("reference for '" + label +
                              "' does not match the mixture length");
        out.emplace(label, it->second);
      }
      return out;
    }

    case SeparatorKind::ideal_ratio_mask: {
      require_references(references, spec.kind);
      if (spec.spectral.hop_length * 2 > spec.spectral.window_length)
        throw ConfigError("ideal_ratio_mask requires a COLA spectral config");
      for (const auto& [label, ref] : *references)
        if (ref.size() != mixture.size())
          throw ContractError("reference for '" + label +
                              "' does not match the mixture length");

      const Spectrogram mix_spec = stft(mixture, spec.spectral);
      const auto masks = irm_masks(spec, *references);
      for (const auto& label : labels) {
        const auto it = masks.find(label);
        if (it == masks.end()) {
          out.emplace(label,
                      zero_waveform(mixture.size(), mixture.sample_rate));
          continue;
        }
        Spectrogram masked = mix_spec;
        for (std::size_t i = 0; i < masked.cdata.size(); ++i)
          masked.cdata[i] *= it->second.rdata[i];
        out.emplace(label, istft(masked, spec.spectral));
      }
      return out;
    }
  }
  throw ContractError("unhandled separator kind");
}

}  // namespace stemkit
