#pragma once

#include <utility>
#include <vector>

#include "stemkit/audio.hpp"

namespace stemkit {

// Composite objective: weighted sum of waveform L1, multi-scale log-mel L1
// and multi-resolution STFT (magnitude + log-magnitude) L1 terms. All
// reductions are means, so weights are independent of signal length and
// scale counts. Every term stays finite for silent inputs via the log floor.
struct LossConfig {
  std::vector<int> stft_windows{512, 1024, 2048};
  std::vector<std::pair<int, int>> mel_scales{
      {5, 32}, {10, 64}, {20, 128}, {40, 256}, {80, 512}, {160, 1024}, {320, 2048}};
  double weight_l1 = 1.0;
  double weight_mel = 0.7;
  double weight_stft = 0.3;
  double log_floor = 1e-5;
  double mel_fmin = 0.0;
  double mel_fmax = 0.0;  // 0 = Nyquist
};

void validate_loss_config(const LossConfig& cfg);

struct LossBreakdown {
  double l1 = 0.0;
  double mel = 0.0;
  double stft = 0.0;
  double composite = 0.0;
};

// Mean absolute sample difference.
double l1_waveform(const Waveform& estimate, const Waveform& target);

// Mean over mel scales of the mean elementwise L1 between log-mel
// spectrograms (hop = window/4).
double mel_loss(const Waveform& estimate, const Waveform& target,
                const LossConfig& cfg);

// Mean over resolutions of L1(|STFT|) + L1(log|STFT|), each a mean over
// elements.
double stft_loss(const Waveform& estimate, const Waveform& target,
                 const LossConfig& cfg);

LossBreakdown combine_losses(const LossConfig& cfg, double l1, double mel,
                             double stft);

LossBreakdown composite_loss(const Waveform& estimate, const Waveform& target,
                             const LossConfig& cfg);

// Periodic activation x + sin^2(a*x)/a; monotone non-decreasing with
// derivative 1 + sin(2*a*x).
double snake(double x, double a);
double snake_derivative(double x, double a);

}  // namespace stemkit
