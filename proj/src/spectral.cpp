#include "stemkit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

namespace stemkit {

namespace {

// FFTW planning is not thread safe; plans are cached per size under a lock
// and executed through the new-array interface on fftw_malloc'd buffers,
// which is safe to run concurrently.
class FftEngine {
 public:
  static FftEngine& instance() {
    static FftEngine engine;
    return engine;
  }

  void rfft(const std::vector<double>& in, std::vector<std::complex<double>>& out) {
    const int n = static_cast<int>(in.size());
    fftw_plan plan = r2c_plan(n);
    double* buf_in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    fftw_complex* buf_out = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    std::copy(in.begin(), in.end(), buf_in);
    fftw_execute_dft_r2c(plan, buf_in, buf_out);
    out.resize(static_cast<std::size_t>(n / 2 + 1));
    for (int k = 0; k <= n / 2; ++k)
      out[static_cast<std::size_t>(k)] = {buf_out[k][0], buf_out[k][1]};
    fftw_free(buf_in);
    fftw_free(buf_out);
  }

  // Unnormalized inverse; caller divides by n.
  void irfft(const std::vector<std::complex<double>>& in, int n,
             std::vector<double>& out) {
    fftw_plan plan = c2r_plan(n);
    fftw_complex* buf_in = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    double* buf_out = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    for (int k = 0; k <= n / 2; ++k) {
      buf_in[k][0] = in[static_cast<std::size_t>(k)].real();
      buf_in[k][1] = in[static_cast<std::size_t>(k)].imag();
    }
    fftw_execute_dft_c2r(plan, buf_in, buf_out);
    out.assign(buf_out, buf_out + n);
    fftw_free(buf_in);
    fftw_free(buf_out);
  }

 private:
  fftw_plan r2c_plan(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = r2c_.find(n);
    if (it != r2c_.end()) return it->second;
    double* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    fftw_complex* out = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    return r2c_.emplace(n, plan).first->second;
  }

  fftw_plan c2r_plan(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = c2r_.find(n);
    if (it != c2r_.end()) return it->second;
    fftw_complex* in = static_cast<fftw_complex*>(
        fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    double* out = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    fftw_plan plan = fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    return c2r_.emplace(n, plan).first->second;
  }

  std::mutex mutex_;
  std::map<int, fftw_plan> r2c_;
  std::map<int, fftw_plan> c2r_;
};

}  // namespace

SpectralConfig loss_resolution(int window_length) {
  SpectralConfig cfg;
  cfg.window_length = window_length;
  cfg.hop_length = window_length / 4;
  cfg.fft_size = window_length;
  return cfg;
}

SpectralConfig mel_resolution(int n_mels, int window_length) {
  SpectralConfig cfg = loss_resolution(window_length);
  cfg.n_mels = n_mels;
  return cfg;
}

void validate_spectral_config(const SpectralConfig& cfg) {
  if (cfg.hop_length <= 0 || cfg.window_length < cfg.hop_length ||
      cfg.fft_size < cfg.window_length)
    throw ConfigError(
        "spectral config requires 0 < hop <= window <= fft_size (got hop " +
        std::to_string(cfg.hop_length) + ", window " +
        std::to_string(cfg.window_length) + ", fft " +
        std::to_string(cfg.fft_size) + ")");
  if (cfg.log_floor <= 0.0)
    throw ConfigError("log floor must be positive");
  if (cfg.n_mels < 0) throw ConfigError("n_mels must be non-negative");
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k)
    w[static_cast<std::size_t>(k)] =
        0.5 - 0.5 * std::cos(2.0 * M_PI * k / length);
  return w;
}

Spectrogram stft(const Waveform& w, const SpectralConfig& cfg) {
  validate_spectral_config(cfg);
  if (w.empty()) throw ContractError("stft requires a non-empty waveform");

  const int win = cfg.window_length;
  const int hop = cfg.hop_length;
  const int fft = cfg.fft_size;
  const std::size_t len = w.size();
  const std::size_t frames = (len + static_cast<std::size_t>(hop) - 1) /
                             static_cast<std::size_t>(hop);
  const std::vector<double> window = hann_window(win);
  const int pad = win / 2;  // frame t is centered at sample t*hop

  Spectrogram spec;
  spec.kind = SpectrogramKind::complex_spec;
  spec.bins = static_cast<std::size_t>(fft / 2 + 1);
  spec.frames = frames;
  spec.cdata.resize(spec.bins * frames);
  spec.config = cfg;
  spec.source_length = len;
  spec.sample_rate = w.sample_rate;

  std::vector<double> frame(static_cast<std::size_t>(fft));
  std::vector<std::complex<double>> out;
  for (std::size_t t = 0; t < frames; ++t) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const std::int64_t start =
        static_cast<std::int64_t>(t) * hop - pad;  // index into the signal
    for (int k = 0; k < win; ++k) {
      const std::int64_t idx = start + k;
      if (idx >= 0 && idx < static_cast<std::int64_t>(len))
        frame[static_cast<std::size_t>(k)] =
            window[static_cast<std::size_t>(k)] *
            w.samples[static_cast<std::size_t>(idx)];
    }
    FftEngine::instance().rfft(frame, out);
    for (std::size_t b = 0; b < spec.bins; ++b) spec.c(b, t) = out[b];
  }
  return spec;
}

Waveform istft(const Spectrogram& spec, const SpectralConfig& cfg) {
  validate_spectral_config(cfg);
  if (spec.kind != SpectrogramKind::complex_spec)
    throw ContractError("istft requires a complex spectrogram");
  if (cfg.hop_length * 2 > cfg.window_length)
    throw ConfigError("istft requires hop <= window/2 (COLA for Hann), got hop " +
                      std::to_string(cfg.hop_length) + " window " +
                      std::to_string(cfg.window_length));
  if (spec.bins != static_cast<std::size_t>(cfg.fft_size / 2 + 1))
    throw ContractError("spectrogram bins do not match fft size");

  const int win = cfg.window_length;
  const int hop = cfg.hop_length;
  const int fft = cfg.fft_size;
  const int pad = win / 2;
  const std::size_t out_len = spec.source_length;
  const std::vector<double> window = hann_window(win);

  // Weighted overlap-add: synthesis window applied once more, then each
  // sample normalized by its accumulated squared-window weight.
  const std::size_t acc_len =
      (spec.frames == 0 ? 0 : (spec.frames - 1) * static_cast<std::size_t>(hop)) +
      static_cast<std::size_t>(win);
  std::vector<double> acc(acc_len, 0.0);
  std::vector<double> weight(acc_len, 0.0);

  std::vector<std::complex<double>> bins(spec.bins);
  std::vector<double> frame;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t b = 0; b < spec.bins; ++b) bins[b] = spec.c(b, t);
    FftEngine::instance().irfft(bins, fft, frame);
    const std::size_t start = t * static_cast<std::size_t>(hop);
    for (int k = 0; k < win; ++k) {
      const double wk = window[static_cast<std::size_t>(k)];
      acc[start + static_cast<std::size_t>(k)] +=
          wk * frame[static_cast<std::size_t>(k)] / fft;
      weight[start + static_cast<std::size_t>(k)] += wk * wk;
    }
  }

  std::vector<double> out(out_len, 0.0);
  for (std::size_t n = 0; n < out_len; ++n) {
    const std::size_t padded = n + static_cast<std::size_t>(pad);
    if (padded < acc_len && weight[padded] > 1e-12)
      out[n] = acc[padded] / weight[padded];
  }
  return Waveform{std::move(out), spec.sample_rate};
}

Spectrogram magnitude(const Spectrogram& complex_spec) {
  if (complex_spec.kind != SpectrogramKind::complex_spec)
    throw ContractError("magnitude requires a complex spectrogram");
  Spectrogram out;
  out.kind = SpectrogramKind::magnitude;
  out.bins = complex_spec.bins;
  out.frames = complex_spec.frames;
  out.config = complex_spec.config;
  out.source_length = complex_spec.source_length;
  out.sample_rate = complex_spec.sample_rate;
  out.rdata.resize(out.bins * out.frames);
  for (std::size_t i = 0; i < out.rdata.size(); ++i)
    out.rdata[i] = std::abs(complex_spec.cdata[i]);
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<std::vector<double>> mel_filterbank(const SpectralConfig& cfg,
                                                int sample_rate) {
  validate_spectral_config(cfg);
  if (cfg.n_mels <= 0)
    throw ConfigError("mel filterbank requires n_mels > 0");
  if (sample_rate <= 0)
    throw ConfigError("mel filterbank requires a positive sample rate");
  const double nyquist = sample_rate / 2.0;
  const double fmin = cfg.mel_fmin;
  const double fmax = cfg.mel_fmax > 0.0 ? cfg.mel_fmax : nyquist;
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= nyquist))
    throw ConfigError("mel range requires 0 <= fmin < fmax <= Nyquist");

  const std::size_t bins = static_cast<std::size_t>(cfg.fft_size / 2 + 1);
  const int n_mels = cfg.n_mels;

  // n_mels + 2 points equally spaced on the mel scale; filter i is the
  // triangle spanning points (i, i+1, i+2).
  std::vector<double> hz_points(static_cast<std::size_t>(n_mels) + 2);
  const double mel_lo = hz_to_mel(fmin);
  const double mel_hi = hz_to_mel(fmax);
  for (int i = 0; i < n_mels + 2; ++i)
    hz_points[static_cast<std::size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

  const double bin_hz = static_cast<double>(sample_rate) / cfg.fft_size;
  std::vector<std::vector<double>> fb(
      static_cast<std::size_t>(n_mels), std::vector<double>(bins, 0.0));
  for (int m = 0; m < n_mels; ++m) {
    const double left = hz_points[static_cast<std::size_t>(m)];
    const double center = hz_points[static_cast<std::size_t>(m) + 1];
    const double right = hz_points[static_cast<std::size_t>(m) + 2];
    double row_sum = 0.0;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      double v = 0.0;
      if (f > left && f < right) {
        v = f <= center ? (f - left) / (center - left)
                        : (right - f) / (right - center);
      }
      fb[static_cast<std::size_t>(m)][k] = v;
      row_sum += v;
    }
    if (row_sum <= 0.0)
      throw ConfigError("mel filter " + std::to_string(m) +
                        " is empty: n_mels too large for fft_size " +
                        std::to_string(cfg.fft_size) + " at " +
                        std::to_string(sample_rate) + " Hz");
  }
  return fb;
}

Spectrogram apply_mel(const Spectrogram& magnitude_spec,
                      const std::vector<std::vector<double>>& filterbank) {
  if (magnitude_spec.kind != SpectrogramKind::magnitude)
    throw ContractError("apply_mel requires a magnitude spectrogram");
  if (filterbank.empty() || filterbank.front().size() != magnitude_spec.bins)
    throw ContractError("filterbank shape does not match spectrogram bins");

  Spectrogram out;
  out.kind = SpectrogramKind::mel;
  out.bins = filterbank.size();
  out.frames = magnitude_spec.frames;
  out.config = magnitude_spec.config;
  out.source_length = magnitude_spec.source_length;
  out.sample_rate = magnitude_spec.sample_rate;
  out.rdata.assign(out.bins * out.frames, 0.0);
  for (std::size_t m = 0; m < out.bins; ++m) {
    const std::vector<double>& row = filterbank[m];
    for (std::size_t k = 0; k < magnitude_spec.bins; ++k) {
      const double wk = row[k];
      if (wk == 0.0) continue;
      for (std::size_t t = 0; t < out.frames; ++t)
        out.r(m, t) += wk * magnitude_spec.r(k, t);
    }
  }
  return out;
}

Spectrogram log_compress(const Spectrogram& spec, double floor) {
  if (spec.kind == SpectrogramKind::complex_spec)
    throw ContractError("log_compress requires a real-valued spectrogram");
  if (spec.kind == SpectrogramKind::log_magnitude ||
      spec.kind == SpectrogramKind::log_mel)
    throw ContractError("spectrogram is already log-compressed");
  if (floor <= 0.0) throw ContractError("log floor must be positive");

  Spectrogram out = spec;
  out.kind = spec.kind == SpectrogramKind::mel ? SpectrogramKind::log_mel
                                               : SpectrogramKind::log_magnitude;
  for (double& v : out.rdata) v = std::log(std::max(v, floor));
  return out;
}

void dump_spectrogram(const Spectrogram& spec,
                      const std::filesystem::path& path) {
  if (spec.kind == SpectrogramKind::complex_spec)
    throw ContractError("dump_spectrogram requires a real-valued spectrogram");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write("SPG1", 4);
  const std::uint32_t rows = static_cast<std::uint32_t>(spec.bins);
  const std::uint32_t cols = static_cast<std::uint32_t>(spec.frames);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  for (const double v : spec.rdata) {
    const float f = static_cast<float>(v);
    out.write(reinterpret_cast<const char*>(&f), 4);
  }
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

SpectrogramDump load_spectrogram_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[4];
  std::uint32_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in || std::memcmp(magic, "SPG1", 4) != 0)
    throw FormatError("'" + path.string() + "' is not a spectrogram dump");
  SpectrogramDump dump;
  dump.rows = rows;
  dump.cols = cols;
  dump.values.resize(static_cast<std::size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(dump.values.data()),
          static_cast<std::streamsize>(dump.values.size() * sizeof(float)));
  if (!in) throw FormatError("'" + path.string() + "' is truncated");
  return dump;
}

}  // namespace stemkit
