#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "stemkit/audio.hpp"

namespace stemkit {

enum class WindowType { hann };

// STFT/mel analysis parameters. fft_size >= window_length (the windowed
// frame is zero-padded to fft_size). n_mels == 0 means no mel stage;
// mel_fmax == 0 resolves to Nyquist at analysis time.
struct SpectralConfig {
  int window_length = 1024;
  int hop_length = 256;
  int fft_size = 1024;
  WindowType window = WindowType::hann;
  int n_mels = 0;
  double mel_fmin = 0.0;
  double mel_fmax = 0.0;
  double log_floor = 1e-5;
};

// Loss-feature resolution: hop = window/4, no zero padding.
SpectralConfig loss_resolution(int window_length);
SpectralConfig mel_resolution(int n_mels, int window_length);

void validate_spectral_config(const SpectralConfig& cfg);

enum class SpectrogramKind { complex_spec, magnitude, log_magnitude, mel, log_mel };

// Bins-by-frames array. Complex kind uses cdata, the rest rdata,
// both row-major with frames contiguous per bin.
struct Spectrogram {
  SpectrogramKind kind = SpectrogramKind::complex_spec;
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<std::complex<double>> cdata;
  std::vector<double> rdata;
  SpectralConfig config;
  std::size_t source_length = 0;
  int sample_rate = 0;

  std::complex<double>& c(std::size_t bin, std::size_t frame) {
    return cdata[bin * frames + frame];
  }
  std::complex<double> c(std::size_t bin, std::size_t frame) const {
    return cdata[bin * frames + frame];
  }
  double& r(std::size_t bin, std::size_t frame) {
    return rdata[bin * frames + frame];
  }
  double r(std::size_t bin, std::size_t frame) const {
    return rdata[bin * frames + frame];
  }
};

// Periodic Hann window of the given length.
std::vector<double> hann_window(int length);

// Centered STFT: the signal is zero-padded by window/2 on the left and the
// frame count is ceil(len / hop). Linear in the input.
Spectrogram stft(const Waveform& w, const SpectralConfig& cfg);

// Weighted overlap-add inverse; requires hop <= window/2 (COLA for Hann).
// Reconstructs exactly source_length samples.
Waveform istft(const Spectrogram& spec, const SpectralConfig& cfg);

Spectrogram magnitude(const Spectrogram& complex_spec);

// Triangular filters on the HTK mel scale, one row per mel band over
// fft_size/2+1 linear bins. Throws ConfigError if any filter is empty.
std::vector<std::vector<double>> mel_filterbank(const SpectralConfig& cfg,
                                                int sample_rate);

Spectrogram apply_mel(const Spectrogram& magnitude_spec,
                      const std::vector<std::vector<double>>& filterbank);

// Elementwise log(max(value, floor)).
Spectrogram log_compress(const Spectrogram& spec, double floor);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Debug dump: "SPG1" magic, uint32 rows, uint32 cols, float32 row-major.
void dump_spectrogram(const Spectrogram& spec,
                      const std::filesystem::path& path);
struct SpectrogramDump {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> values;
};
SpectrogramDump load_spectrogram_dump(const std::filesystem::path& path);

}  // namespace stemkit
