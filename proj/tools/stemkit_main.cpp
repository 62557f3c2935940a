#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stemkit/commands.hpp"

namespace {

using stemkit::RunConfig;

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return stemkit::load_run_config(path);
}

int run(int argc, char** argv) {
  CLI::App app{"stemkit: power-set stem augmentation, silence-aware losses "
               "and separation metrics"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 1;
  app.add_option("-c,--config", config_path, "RunConfig JSON file")
      ->each([](const std::string&) {});
  app.add_option("-j,--workers", workers, "worker threads for per-entry work")
      ->check(CLI::PositiveNumber);

  auto* augment = app.add_subcommand(
      "augment", "mix every stem subset per clip and emit a dataset manifest");
  std::string augment_input, augment_out;
  augment->add_option("--input", augment_input,
                      "stems directory (one subdirectory per clip)");
  augment->add_option("--out", augment_out,
                      "work directory (dataset lands in <out>/dataset)");

  auto* separate = app.add_subcommand(
      "separate", "run a reference separator over a dataset manifest");
  std::string manifest_path, estimates_out, kind = "oracle_targets";
  int sep_window = 1024, sep_hop = 0, sep_fft = 0;
  double mask_exponent = 1.0;
  separate->add_option("--manifest", manifest_path, "manifest.jsonl path")
      ->required();
  separate->add_option("--out", estimates_out, "estimates output directory")
      ->required();
  separate->add_option("--kind", kind,
                       "oracle_targets | passthrough | zeros | ideal_ratio_mask");
  separate->add_option("--window", sep_window, "IRM STFT window length");
  separate->add_option("--hop", sep_hop, "IRM hop length (default window/4)");
  separate->add_option("--fft", sep_fft, "IRM FFT size (default window)");
  separate->add_option("--mask-exponent", mask_exponent,
                       "IRM magnitude exponent (1 = ratio, 2 = Wiener-like)");

  auto* loss = app.add_subcommand(
      "loss", "composite loss between an estimate and a target WAV");
  std::string loss_estimate, loss_target;
  loss->add_option("estimate", loss_estimate, "estimate WAV")->required();
  loss->add_option("target", loss_target, "target WAV")->required();

  auto* evaluate = app.add_subcommand(
      "evaluate", "score an estimates directory against a manifest");
  std::string eval_manifest, eval_estimates, eval_out;
  evaluate->add_option("--manifest", eval_manifest, "manifest.jsonl path")
      ->required();
  evaluate->add_option("--estimates", eval_estimates,
                       "estimates directory (mirrors the manifest layout)")
      ->required();
  evaluate->add_option("--out", eval_out, "report output directory")->required();

  auto* report = app.add_subcommand("report", "render a report.json as tables");
  std::string report_path, report_csv_dir;
  report->add_option("report", report_path, "report.json path")->required();
  report->add_option("--csv-dir", report_csv_dir, "re-emit per-stem CSVs here");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg = load_config_or_default(config_path);

  if (augment->parsed()) {
    if (!augment_input.empty()) cfg.paths.input_dir = augment_input;
    if (!augment_out.empty()) cfg.paths.work_dir = augment_out;
    const stemkit::AugmentSummary summary = stemkit::cmd_augment(cfg, workers);
    const nlohmann::json out{
        {"clips", summary.clips},
        {"subsets_per_clip", summary.subsets_per_clip},
        {"entries", summary.entries},
        {"total_duration_s", summary.total_duration_s},
        {"manifest", summary.manifest_path.generic_string()}};
    std::cout << out.dump(2) << '\n';
  } else if (separate->parsed()) {
    stemkit::SeparatorSpec spec;
    spec.kind = stemkit::separator_kind_from_string(kind);
    spec.spectral.window_length = sep_window;
    spec.spectral.hop_length = sep_hop > 0 ? sep_hop : sep_window / 4;
    spec.spectral.fft_size = sep_fft > 0 ? sep_fft : sep_window;
    spec.mask_exponent = mask_exponent;
    stemkit::cmd_separate(cfg, spec, manifest_path, estimates_out, workers);
    std::cout << "estimates written to " << estimates_out << '\n';
  } else if (loss->parsed()) {
    const stemkit::LossBreakdown breakdown =
        stemkit::cmd_loss(cfg, loss_estimate, loss_target);
    const nlohmann::json out{{"l1", breakdown.l1},
                             {"mel", breakdown.mel},
                             {"stft", breakdown.stft},
                             {"composite", breakdown.composite},
                             {"weights",
                              {{"l1", cfg.loss.weight_l1},
                               {"mel", cfg.loss.weight_mel},
                               {"stft", cfg.loss.weight_stft}}}};
    std::cout << out.dump(2) << '\n';
  } else if (evaluate->parsed()) {
    const stemkit::EvaluateOutputs outputs = stemkit::cmd_evaluate(
        cfg, eval_manifest, eval_estimates, eval_out, workers);
    stemkit::render_report(outputs.report_json, std::cout);
    std::cout << "report: " << outputs.report_json.generic_string() << '\n';
  } else if (report->parsed()) {
    stemkit::render_report(report_path, std::cout, report_csv_dir);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stemkit::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << '\n';
    return 2;
  } catch (const stemkit::DataError& ex) {
    std::cerr << "data error: " << ex.what() << '\n';
    return 3;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << '\n';
    return 4;
  }
}
