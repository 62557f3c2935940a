#include "stemkit/loss.hpp"

#include <cmath>

#include "stemkit/spectral.hpp"

namespace stemkit {

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void check_pair(const Waveform& estimate, const Waveform& target,
                const char* what) {
  if (estimate.size() != target.size())
    throw ContractError(std::string(what) + ": length mismatch (" +
                        std::to_string(estimate.size()) + " vs " +
                        std::to_string(target.size()) + ")");
  if (estimate.sample_rate != target.sample_rate)
    throw ContractError(std::string(what) + ": sample rate mismatch");
}

double mean_abs_diff(const Spectrogram& a, const Spectrogram& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rdata.size(); ++i)
    acc += std::abs(a.rdata[i] - b.rdata[i]);
  return a.rdata.empty() ? 0.0 : acc / static_cast<double>(a.rdata.size());
}

SpectralConfig mel_cfg_for(const LossConfig& cfg, int n_mels, int window) {
  SpectralConfig sc = mel_resolution(n_mels, window);
  sc.log_floor = cfg.log_floor;
  sc.mel_fmin = cfg.mel_fmin;
  sc.mel_fmax = cfg.mel_fmax;
  return sc;
}

}  // namespace

void validate_loss_config(const LossConfig& cfg) {
  if (cfg.stft_windows.empty() || cfg.mel_scales.empty())
    throw ConfigError("loss config requires non-empty window lists");
  if (cfg.weight_l1 < 0.0 || cfg.weight_mel < 0.0 || cfg.weight_stft < 0.0)
    throw ConfigError("loss weights must be non-negative");
  if (cfg.weight_l1 + cfg.weight_mel + cfg.weight_stft <= 0.0)
    throw ConfigError("at least one loss weight must be positive");
  if (cfg.log_floor <= 0.0) throw ConfigError("log floor must be positive");
  for (const int w : cfg.stft_windows)
    if (!is_power_of_two(w) || w < 32)
      throw ConfigError("stft window " + std::to_string(w) +
                        " must be a power of two >= 32");
  for (const auto& [n_mels, w] : cfg.mel_scales) {
    if (n_mels <= 0)
      throw ConfigError("mel scale bin count must be positive");
    if (!is_power_of_two(w) || w < 32)
      throw ConfigError("mel window " + std::to_string(w) +
                        " must be a power of two >= 32");
  }
}

double l1_waveform(const Waveform& estimate, const Waveform& target) {
  check_pair(estimate, target, "l1_waveform");
  if (estimate.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i)
    acc += std::abs(estimate.samples[i] - target.samples[i]);
  return acc / static_cast<double>(estimate.size());
}

double mel_loss(const Waveform& estimate, const Waveform& target,
                const LossConfig& cfg) {
  check_pair(estimate, target, "mel_loss");
  validate_loss_config(cfg);
  if (estimate.empty()) return 0.0;

  double acc = 0.0;
  for (const auto& [n_mels, window] : cfg.mel_scales) {
    const SpectralConfig sc = mel_cfg_for(cfg, n_mels, window);
    const auto fb = mel_filterbank(sc, estimate.sample_rate);
    const Spectrogram le =
        log_compress(apply_mel(magnitude(stft(estimate, sc)), fb), cfg.log_floor);
    const Spectrogram lt =
        log_compress(apply_mel(magnitude(stft(target, sc)), fb), cfg.log_floor);
    acc += mean_abs_diff(le, lt);
  }
  return acc / static_cast<double>(cfg.mel_scales.size());
}

double stft_loss(const Waveform& estimate, const Waveform& target,
                 const LossConfig& cfg) {
  check_pair(estimate, target, "stft_loss");
  validate_loss_config(cfg);
  if (estimate.empty()) return 0.0;

  double acc = 0.0;
  for (const int window : cfg.stft_windows) {
    SpectralConfig sc = loss_resolution(window);
    sc.log_floor = cfg.log_floor;
    const Spectrogram me = magnitude(stft(estimate, sc));
    const Spectrogram mt = magnitude(stft(target, sc));
    acc += mean_abs_diff(me, mt) +
           mean_abs_diff(log_compress(me, cfg.log_floor),
                         log_compress(mt, cfg.log_floor));
  }
  return acc / static_cast<double>(cfg.stft_windows.size());
}

LossBreakdown combine_losses(const LossConfig& cfg, double l1, double mel,
                             double stft) {
  LossBreakdown b;
  b.l1 = l1;
  b.mel = mel;
  b.stft = stft;
  b.composite =
      cfg.weight_l1 * l1 + cfg.weight_mel * mel + cfg.weight_stft * stft;
  return b;
}

LossBreakdown composite_loss(const Waveform& estimate, const Waveform& target,
                             const LossConfig& cfg) {
  return combine_losses(cfg, l1_waveform(estimate, target),
                        mel_loss(estimate, target, cfg),
                        stft_loss(estimate, target, cfg));
}

double snake(double x, double a) {
  if (a <= 0.0) throw ContractError("snake requires a > 0");
  const double s = std::sin(a * x);
  return x + s * s / a;
}

double snake_derivative(double x, double a) {
  if (a <= 0.0) throw ContractError("snake requires a > 0");
  return 1.0 + std::sin(2.0 * a * x);
}

}  // namespace stemkit
