// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Run via ctest or directly:
//   stemkit_acceptance --cli path/to/stemkit

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reference_dsp.hpp"
#include "stemkit/commands.hpp"
#include "stemkit/manifest.hpp"
#include "stemkit/metrics.hpp"
#include "stemkit/parallel.hpp"
#include "stemkit/powerset.hpp"
#include "stemkit/separators.hpp"
#include "stemkit/wav.hpp"

namespace fs = std::filesystem;
using namespace stemkit;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

fs::path g_root;
std::string g_cli;

fs::path scratch(const std::string& name) {
  const fs::path dir = g_root / name;
  fs::create_directories(dir);
  return dir;
}

void drop_scratch(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
}

Waveform sine(double freq, double amp, std::size_t n, int sr) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = amp * std::sin(2.0 * M_PI * freq * static_cast<double>(i) / sr);
  return Waveform{std::move(s), sr};
}

Waveform noise(std::mt19937& rng, std::size_t n, int sr, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> s(n);
  for (double& v : s) v = dist(rng);
  return Waveform{std::move(s), sr};
}

std::vector<std::string> make_labels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("stem" + std::to_string(i));
  return labels;
}

// One synthetic clip: distinct sine per stem plus a dash of noise.
StemClip synth_clip(const std::string& id, const std::vector<std::string>& labels,
                    std::size_t len, int sr, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<Waveform> stems;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Waveform w = sine(180.0 * (static_cast<double>(i) + 1.0) + 35.0, 0.3, len, sr);
    const Waveform n = noise(rng, len, sr, 0.02);
    for (std::size_t k = 0; k < len; ++k) w.samples[k] += n.samples[k];
    stems.push_back(std::move(w));
  }
  return StemClip(id, labels, std::move(stems));
}

void write_clip_stems(const StemClip& clip, const fs::path& input_dir) {
  const fs::path dir = input_dir / clip.clip_id();
  fs::create_directories(dir);
  for (const auto& label : clip.labels())
    write_wav(dir / (sanitize_label(label) + ".wav"), clip.stem(label),
              WavEncoding::float32);
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

// --- criteria ---------------------------------------------------------

void criterion_power_set_count() {
  const auto started = std::chrono::steady_clock::now();
  for (int n = 1; n <= 6; ++n) {
    const fs::path dir = scratch("c1-n" + std::to_string(n));
    const auto labels = make_labels(n);
    RunConfig cfg;
    cfg.labels = labels;
    cfg.paths.input_dir = dir / "stems";
    cfg.paths.work_dir = dir / "work";
    write_clip_stems(synth_clip("clip0", labels, 8 * 8000, 8000, 100 + n),
                     cfg.paths.input_dir);

    const AugmentSummary summary = cmd_augment(cfg);
    const std::size_t expected = (1u << n) - 1;
    require(summary.subsets_per_clip == expected,
            "n=" + std::to_string(n) + ": subsets_per_clip " +
                std::to_string(summary.subsets_per_clip) + " != " +
                std::to_string(expected));
    require(summary.entries == expected * 2,
            "n=" + std::to_string(n) + ": entries " +
                std::to_string(summary.entries) + " != " +
                std::to_string(expected * 2));

    if (n == 6) {
      const DatasetManifest manifest = load_manifest(summary.manifest_path);
      std::size_t seg0 = 0, seg1 = 0;
      for (const auto& e : manifest.entries)
        (e.segment_index == 0 ? seg0 : seg1) += 1;
      require(seg0 == 63 && seg1 == 63,
              "6-stem clip: per-segment mixture counts " +
                  std::to_string(seg0) + "/" + std::to_string(seg1) +
                  " != 63/63");
    }
    drop_scratch(dir);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  require(elapsed < 60.0,
          "power-set runs took " + fmt(elapsed) + " s (>= 60 s)");
}

void criterion_additivity() {
  const fs::path dir = scratch("c2");
  const auto labels = make_labels(6);
  RunConfig cfg;
  cfg.labels = labels;
  cfg.augment.segment_length_s = 1.0;
  cfg.paths.input_dir = dir / "stems";
  cfg.paths.work_dir = dir / "work";
  const StemClip clip_a = synth_clip("clip_a", labels, 8 * 8000, 8000, 201);
  const StemClip clip_b = synth_clip("clip_b", labels, 8 * 8000, 8000, 202);
  write_clip_stems(clip_a, cfg.paths.input_dir);
  write_clip_stems(clip_b, cfg.paths.input_dir);

  const AugmentSummary summary = cmd_augment(cfg, 2);
  require(summary.entries == 2u * 63u * 8u,
          "expected 1008 entries, got " + std::to_string(summary.entries));
  const DatasetManifest manifest = load_manifest(summary.manifest_path);
  const fs::path manifest_dir = summary.manifest_path.parent_path();

  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, manifest.entries.size() - 1);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ManifestEntry& entry = manifest.entries[pick(rng)];
    const Waveform mixture = read_wav(manifest_dir / entry.mixture);
    std::vector<double> sum(mixture.size(), 0.0);
    for (const auto& [label, rel] : entry.targets) {
      const Waveform target = read_wav(manifest_dir / rel);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += target.samples[i];
    }
    for (std::size_t i = 0; i < sum.size(); ++i)
      worst = std::max(worst, std::abs(mixture.samples[i] - sum[i]));
  }
  require(worst <= 1e-6,
          "max |mixture - sum(targets)| = " + fmt(worst) + " > 1e-6");

  // Inactive targets are exactly zero, by the mixing contract.
  for (const auto& subset : enumerate_subsets(labels, 1)) {
    const SubsetMixture mixed = mix_subset(clip_a, subset);
    for (const auto& [label, target] : mixed.targets) {
      const bool active = std::find(subset.begin(), subset.end(), label) !=
                          subset.end();
      if (active) continue;
      for (const double v : target.samples)
        require(v == 0.0, "inactive target '" + label + "' is not zero");
    }
  }
  drop_scratch(dir);
}

void criterion_si_sdr_oracle() {
  std::mt19937 rng(303);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Waveform s = noise(rng, 400, 8000);
    Waveform e = noise(rng, 400, 8000, 0.4);
    for (std::size_t i = 0; i < e.size(); ++i) e.samples[i] += s.samples[i];
    const double mine = si_sdr(e, s);
    const double ref = refdsp::brute_si_sdr(e.samples, s.samples, 60.0);
    worst = std::max(worst, std::abs(mine - ref));
  }
  require(worst <= 1e-9,
          "max |si_sdr - brute force| = " + fmt(worst) + " dB > 1e-9");

  const Waveform s = noise(rng, 600, 8000);
  Waveform e = noise(rng, 600, 8000, 0.3);
  for (std::size_t i = 0; i < e.size(); ++i) e.samples[i] += s.samples[i];
  const double base = si_sdr(e, s);
  for (const double c : {0.01, 1.0, 100.0, -1.0}) {
    Waveform scaled = e;
    for (double& v : scaled.samples) v *= c;
    const double diff = std::abs(si_sdr(scaled, s) - base);
    require(diff <= 1e-9, "scale c=" + fmt(c) + " shifted si_sdr by " +
                              fmt(diff) + " dB > 1e-9");
  }
}

void criterion_closed_form_noise() {
  std::mt19937 rng(404);
  const Waveform s = noise(rng, 4000, 8000);
  Waveform n = noise(rng, 4000, 8000);
  double dot = 0.0, s_energy = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    dot += n.samples[i] * s.samples[i];
    s_energy += s.samples[i] * s.samples[i];
  }
  for (std::size_t i = 0; i < s.size(); ++i)
    n.samples[i] -= dot / s_energy * s.samples[i];
  double n_energy = 0.0;
  for (const double v : n.samples) n_energy += v * v;

  for (const double eps : {1e-3, 1e-2, 1e-1, 1.0}) {
    Waveform e = s;
    for (std::size_t i = 0; i < e.size(); ++i)
      e.samples[i] += eps * n.samples[i];
    const double expected =
        10.0 * std::log10(s_energy / (eps * eps * n_energy));
    // Raised cap: at eps = 1e-3 the true value sits near the default 60 dB.
    const double diff = std::abs(si_sdr(e, s, 200.0) - expected);
    require(diff <= 1e-6, "eps=" + fmt(eps) + ": |si_sdr - closed form| = " +
                              fmt(diff) + " dB > 1e-6");
  }
}

void criterion_rms_anchors() {
  const double silent = rms_dbfs(zero_waveform(4096, 8000));
  require(std::abs(silent + 120.0) <= 1e-9,
          "zero signal: " + fmt(silent) + " dB != -120");
  const Waveform full_sine = sine(440.0, 1.0, 8000, 8000);
  const double sine_db = rms_dbfs(full_sine);
  require(std::abs(sine_db + 3.0103) <= 0.01,
          "full-scale sine: " + fmt(sine_db) + " dB != -3.01 +- 0.01");
  const Waveform ones{std::vector<double>(4096, 1.0), 8000};
  const double ones_db = rms_dbfs(ones);
  require(std::abs(ones_db) <= 1e-9,
          "constant 1.0: " + fmt(ones_db) + " dB != 0 +- 1e-9");
}

EntryData synthetic_entry(std::mt19937& rng) {
  EntryData entry;
  entry.labels = {"a", "b", "c"};
  const Waveform stem_a = noise(rng, 1200, 8000, 0.4);
  const Waveform stem_b = noise(rng, 1200, 8000, 0.4);
  Waveform mixture{std::vector<double>(1200, 0.0), 8000};
  for (std::size_t i = 0; i < 1200; ++i)
    mixture.samples[i] = stem_a.samples[i] + stem_b.samples[i];
  entry.mixture = mixture;
  entry.references = {
      {"a", stem_a}, {"b", stem_b}, {"c", zero_waveform(1200, 8000)}};
  entry.present = {"a", "b"};
  return entry;
}

void criterion_passthrough_oracle_bounds() {
  std::mt19937 rng(606);
  const EvalConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    const EntryData entry = synthetic_entry(rng);

    std::map<std::string, Waveform> passthrough;
    for (const auto& label : entry.labels)
      passthrough.emplace(label, entry.mixture);
    for (const auto& score : evaluate_entry(passthrough, entry, cfg))
      if (score.reference_present)
        require(*score.sdri_db == 0.0,
                "passthrough sdri = " + fmt(*score.sdri_db) + " != 0 exactly");

    std::map<std::string, Waveform> oracle;
    for (const auto& label : entry.labels)
      oracle.emplace(label, entry.references.at(label));
    for (const auto& score : evaluate_entry(oracle, entry, cfg)) {
      if (score.reference_present)
        require(*score.si_sdr_db == 60.0,
                "oracle si_sdr = " + fmt(*score.si_sdr_db) + " != cap 60");
      else
        require(std::abs(score.rms_dbfs + 120.0) <= 1e-9,
                "oracle silent stem rms = " + fmt(score.rms_dbfs) + " != -120");
    }
  }
}

void criterion_silence_totality() {
  const LossConfig cfg;  // full default grid: 3 windows + 7 mel scales
  const int sr = 8000;
  const std::size_t len = 1600;
  const Waveform silence = zero_waveform(len, sr);

  std::mt19937 seeder(707);
  std::vector<unsigned> seeds(334);
  for (auto& s : seeds) s = seeder();

  std::atomic<bool> ok{true};
  std::string first_error;
  std::mutex error_mutex;
  parallel_for(seeds.size(), 2, [&](std::size_t idx) {
    std::mt19937 rng(seeds[idx]);
    const Waveform x = noise(rng, len, sr);
    const Waveform y = noise(rng, len, sr);
    // Three pair shapes per seed: (x, silent), (silent, x), (x, y).
    for (const auto& [e, t] : {std::pair{x, silence}, std::pair{silence, x},
                               std::pair{x, y}}) {
      const LossBreakdown b = composite_loss(e, t, cfg);
      for (const double v : {b.l1, b.mel, b.stft, b.composite}) {
        if (!std::isfinite(v) || v < 0.0) {
          std::lock_guard<std::mutex> lock(error_mutex);
          ok = false;
          if (first_error.empty())
            first_error = "non-finite or negative loss component " + fmt(v);
        }
      }
    }
  });
  require(ok.load(), first_error);

  const LossBreakdown silent = composite_loss(silence, silence, cfg);
  require(silent.l1 == 0.0 && silent.mel == 0.0 && silent.stft == 0.0 &&
              silent.composite == 0.0,
          "(silent, silent) composite = " + fmt(silent.composite) + " != 0");
}

void criterion_dual_implementation_loss() {
  const LossConfig cfg;  // default scales per the setup
  const int sr = 8000;
  const std::size_t len = 2048;

  std::mt19937 seeder(808);
  std::vector<unsigned> seeds(100);
  for (auto& s : seeds) s = seeder();

  std::vector<double> worst_mel(seeds.size(), 0.0);
  std::vector<double> worst_stft(seeds.size(), 0.0);
  parallel_for(seeds.size(), 2, [&](std::size_t idx) {
    std::mt19937 rng(seeds[idx]);
    const Waveform a = noise(rng, len, sr);
    const Waveform b = noise(rng, len, sr);

    const double mel_mine = mel_loss(a, b, cfg);
    const double mel_ref = refdsp::mel_loss_multi(
        a.samples, b.samples, cfg.mel_scales, sr, cfg.log_floor);
    worst_mel[idx] = std::abs(mel_mine - mel_ref) /
                     std::max({std::abs(mel_ref), std::abs(mel_mine), 1e-12});

    const double stft_mine = stft_loss(a, b, cfg);
    const double stft_ref = refdsp::stft_loss_multi(
        a.samples, b.samples, cfg.stft_windows, cfg.log_floor);
    worst_stft[idx] = std::abs(stft_mine - stft_ref) /
                      std::max({std::abs(stft_ref), std::abs(stft_mine), 1e-12});
  });
  const double mel_err = *std::max_element(worst_mel.begin(), worst_mel.end());
  const double stft_err =
      *std::max_element(worst_stft.begin(), worst_stft.end());
  require(mel_err <= 1e-6,
          "mel_loss vs naive reference: rel err " + fmt(mel_err) + " > 1e-6");
  require(stft_err <= 1e-6,
          "stft_loss vs naive reference: rel err " + fmt(stft_err) + " > 1e-6");
}

void criterion_snake_gradient() {
  for (const double a : {0.05, 0.5, 1.0, 7.0, 30.0})
    require(snake(0.0, a) == 0.0, "snake(0, " + fmt(a) + ") != 0");

  std::mt19937 rng(909);
  std::uniform_real_distribution<double> xs(-4.0, 4.0);
  std::uniform_real_distribution<double> as(0.05, 8.0);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double x = xs(rng);
    const double a = as(rng);
    const double fd = (snake(x + h, a) - snake(x - h, a)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - snake_derivative(x, a)));
  }
  require(worst <= 1e-6,
          "max |finite difference - (1 + sin 2ax)| = " + fmt(worst) + " > 1e-6");
}

void criterion_istft_round_trip() {
  std::mt19937 rng(1010);
  for (const int window : {512, 1024, 2048}) {
    const SpectralConfig cfg = loss_resolution(window);
    const Waveform w = noise(rng, 20000, 16000);
    const Waveform back = istft(stft(w, cfg), cfg);
    require(back.size() == w.size(), "round trip changed the length");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      num += (back.samples[i] - w.samples[i]) * (back.samples[i] - w.samples[i]);
      den += w.samples[i] * w.samples[i];
    }
    const double rel = std::sqrt(num / den);
    require(rel <= 1e-6, "window " + std::to_string(window) +
                             ": relative L2 error " + fmt(rel) + " > 1e-6");
  }
}

void criterion_irm_sanity() {
  const int sr = 8000;
  const std::size_t len = 16000;
  const Waveform low = sine(440.0, 0.5, len, sr);
  const Waveform high = sine(3520.0, 0.4, len, sr);
  Waveform mixture{std::vector<double>(len), sr};
  for (std::size_t i = 0; i < len; ++i)
    mixture.samples[i] = low.samples[i] + high.samples[i];

  SeparatorSpec spec;
  spec.kind = SeparatorKind::ideal_ratio_mask;
  spec.spectral = loss_resolution(1024);
  const std::map<std::string, Waveform> refs{{"low", low}, {"high", high}};

  const auto estimates = separate(spec, mixture, &refs, {"low", "high"});
  const double sdr_low = si_sdr(estimates.at("low"), low);
  const double sdr_high = si_sdr(estimates.at("high"), high);
  require(sdr_low >= 20.0,
          "low stem si_sdr " + fmt(sdr_low) + " dB < 20 dB");
  require(sdr_high >= 20.0,
          "high stem si_sdr " + fmt(sdr_high) + " dB < 20 dB");

  const auto masks = irm_masks(spec, refs);
  const Spectrogram mix_mag = magnitude(stft(mixture, spec.spectral));
  for (std::size_t i = 0; i < mix_mag.rdata.size(); ++i) {
    if (mix_mag.rdata[i] <= 1e-12) continue;
    const double total = masks.at("low").rdata[i] + masks.at("high").rdata[i];
    require(std::abs(total - 1.0) <= 1e-9,
            "mask sum " + fmt(total) + " != 1 above the floor");
  }
}

void criterion_detection_f1_oracle() {
  std::mt19937 rng(1212);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<StemScore> scores;
    std::size_t tp = 0, fp = 0, fn = 0;
    const int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      StemScore s;
      s.label = "L" + std::to_string(i % 3);
      s.reference_present = coin(rng);
      s.detected = coin(rng);
      if (s.detected && s.reference_present) ++tp;
      if (s.detected && !s.reference_present) ++fp;
      if (!s.detected && s.reference_present) ++fn;
      scores.push_back(s);
    }
    const DetectionStats st = detection_f1(scores, false).at("all");
    require(st.tp == tp && st.fp == fp && st.fn == fn,
            "confusion counts diverge from brute force");
    const double precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
    const double recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
    const double f1 = precision + recall > 0
                          ? 2 * precision * recall / (precision + recall)
                          : 0.0;
    require(std::abs(st.f1 - f1) <= 1e-12, "f1 diverges from brute force");
  }

  // Zeros separator: recall 0 on active stems, no false positives.
  const EvalConfig cfg;
  std::vector<StemScore> all_scores;
  for (int trial = 0; trial < 10; ++trial) {
    const EntryData entry = synthetic_entry(rng);
    std::map<std::string, Waveform> zeros;
    for (const auto& label : entry.labels)
      zeros.emplace(label, zero_waveform(entry.mixture.size(), 8000));
    const auto scores = evaluate_entry(zeros, entry, cfg);
    all_scores.insert(all_scores.end(), scores.begin(), scores.end());
  }
  const DetectionStats st = detection_f1(all_scores, false).at("all");
  require(st.tp + st.fn > 0, "fixture produced no positives");
  require(st.recall == 0.0, "zeros separator recall " + fmt(st.recall) + " != 0");
  require(st.fp == 0, "zeros separator produced false positives");
}

void criterion_end_to_end_determinism() {
  require(!g_cli.empty(), "--cli path not supplied");
  const fs::path dir = scratch("c13");
  const auto labels = make_labels(3);

  const fs::path stems_dir = dir / "stems";
  for (int c = 0; c < 2; ++c)
    write_clip_stems(synth_clip("clip_" + std::to_string(c), labels, 8 * 8000,
                                8000, 1300 + static_cast<unsigned>(c)),
                     stems_dir);

  std::vector<fs::path> report_files;
  for (const std::string run : {"run_a", "run_b"}) {
    const fs::path work = dir / run;
    fs::create_directories(work);
    RunConfig cfg;
    cfg.labels = labels;
    cfg.paths.input_dir = stems_dir;
    cfg.paths.work_dir = work;
    cfg.paths.output_dir = work / "report";
    const fs::path config_path = work / "config.json";
    save_run_config(cfg, config_path);

    const std::string cfg_arg = "--config " + config_path.string();
    require(run_cli(cfg_arg + " augment") == 0, run + ": augment failed");
    const fs::path manifest = work / "dataset" / "manifest.jsonl";
    require(run_cli(cfg_arg + " separate --kind ideal_ratio_mask --window 1024 " +
                    "--manifest " + manifest.string() + " --out " +
                    (work / "estimates").string()) == 0,
            run + ": separate failed");
    require(run_cli(cfg_arg + " evaluate --manifest " + manifest.string() +
                    " --estimates " + (work / "estimates").string() +
                    " --out " + (work / "report").string()) == 0,
            run + ": evaluate failed");
  }

  const fs::path a = dir / "run_a";
  const fs::path b = dir / "run_b";
  require(file_bytes(a / "dataset" / "manifest.jsonl") ==
              file_bytes(b / "dataset" / "manifest.jsonl"),
          "manifests differ between runs");
  for (const std::string rel :
       {"report/per_stem_all_stems.csv", "report/per_stem_subset.csv"})
    require(file_bytes(a / rel) == file_bytes(b / rel),
            rel + " differs between runs");

  // Reports embed the config echo, which contains run-specific paths;
  // compare them after masking those fields.
  auto masked_report = [&](const fs::path& p) {
    std::string text = file_bytes(p / "report" / "report.json");
    std::string::size_type pos;
    const std::string base = (p).generic_string();
    while ((pos = text.find(base)) != std::string::npos)
      text.replace(pos, base.size(), "WORK");
    return text;
  };
  require(masked_report(a) == masked_report(b), "reports differ between runs");

  // Estimates are byte-identical as well.
  for (const auto& p : fs::recursive_directory_iterator(a / "estimates")) {
    if (!p.is_regular_file()) continue;
    const auto rel = fs::relative(p.path(), a / "estimates");
    require(file_bytes(p.path()) == file_bytes(b / "estimates" / rel),
            "estimate " + rel.generic_string() + " differs between runs");
  }
  drop_scratch(dir);
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];

  g_root = fs::temp_directory_path() /
           ("stemkit-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(g_root);

  struct Criterion {
    int id;
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria{
      {1, "power-set count: 2^n - 1 mixtures per clip segment",
       criterion_power_set_count},
      {2, "additivity of emitted mixtures and zero inactive targets",
       criterion_additivity},
      {3, "si_sdr matches brute force and is scale invariant",
       criterion_si_sdr_oracle},
      {4, "si_sdr closed form under orthogonal noise",
       criterion_closed_form_noise},
      {5, "rms_dbfs anchors at -120 / -3.01 / 0 dB", criterion_rms_anchors},
      {6, "passthrough sdri = 0 and oracle bounds",
       criterion_passthrough_oracle_bounds},
      {7, "composite loss is total on silence", criterion_silence_totality},
      {8, "mel/stft losses match the naive reference pipeline",
       criterion_dual_implementation_loss},
      {9, "snake gradient check", criterion_snake_gradient},
      {10, "istft round trip at 512/1024/2048", criterion_istft_round_trip},
      {11, "ideal ratio mask sanity on disjoint sines", criterion_irm_sanity},
      {12, "detection F1 vs brute-force confusion counts",
       criterion_detection_f1_oracle},
      {13, "end-to-end determinism of the full pipeline",
       criterion_end_to_end_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto started = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.fn();
    } catch (const std::exception& ex) {
      error = ex.what();
    }
    const double elapsed = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.1fs", elapsed);
    if (error.empty()) {
      std::cout << "PASS criterion " << criterion.id << ": " << criterion.name
                << " [" << timing << "]\n";
    } else {
      std::cout << "FAIL criterion " << criterion.id << ": " << criterion.name
                << " [" << timing << "]\n      " << error << "\n";
      ++failures;
    }
    std::cout.flush();
  }

  std::error_code ec;
  fs::remove_all(g_root, ec);

  if (failures > 0) {
    std::cout << failures << " of " << criteria.size()
              << " criteria failed\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " criteria passed\n";
  return 0;
}
