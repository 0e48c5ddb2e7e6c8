// segi: command line runner for self-evolving ghost imaging simulations.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "segi/config.hpp"
#include "segi/error.hpp"
#include "segi/experiment.hpp"
#include "segi/metrics.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> snapshot_every;
  std::string filter;
  std::string denoise_cmd;
  std::optional<int> jobs;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "Experiment config file (key = value lines)");
  cmd->add_option("--seed", o.seed, "Master seed (overrides config 'seed')");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--snapshot-every", o.snapshot_every, "Write the result image every N generations");
  cmd->add_option("--filter", o.filter, "Post filter: none | median | gaussian:<sigma>");
  cmd->add_option("--denoise-cmd", o.denoise_cmd,
                  "External denoiser command with {in} and {out} placeholders");
  cmd->add_option("--jobs", o.jobs, "Parallel experiments for sweep-k");
  cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
}

segi::ExperimentConfig build_config(const CommonOptions& o, std::optional<segi::ExperimentMode> mode) {
  segi::ConfigMap config = o.config_path.empty() ? segi::ConfigMap{} : segi::ConfigMap::load(o.config_path);
  for (const auto& kv : o.overrides) config.set_assignment(kv);
  if (mode) config.set("mode", segi::to_string(*mode));
  if (o.seed) config.set("seed", std::to_string(*o.seed));
  if (!o.out_dir.empty()) config.set("output", o.out_dir);
  if (o.snapshot_every) config.set("snapshot_every", std::to_string(*o.snapshot_every));
  if (!o.filter.empty()) config.set("filter", o.filter);
  if (!o.denoise_cmd.empty()) config.set("denoise_cmd", o.denoise_cmd);
  if (o.jobs) config.set("jobs", std::to_string(*o.jobs));
  return segi::load_experiment(config);
}

std::string psnr_text(const std::optional<double>& v, bool identical) {
  if (identical) return "inf";
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f dB", *v);
  return buf;
}

void print_run(const segi::RunReport& r, const char* label) {
  std::printf("%s: ratio %s (%llu measurements), best cf %.4f, PSNR raw %s / filtered %s, "
              "SSIM raw %.4f / filtered %.4f\n",
              label, segi::format_ratio(r.sampling_ratio).c_str(),
              static_cast<unsigned long long>(r.total_measurements), r.best_cf,
              psnr_text(r.metrics.psnr_raw, r.metrics.raw_identical).c_str(),
              psnr_text(r.metrics.psnr_filtered, r.metrics.filtered_identical).c_str(),
              r.metrics.ssim_raw, r.metrics.ssim_filtered);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-evolving ghost imaging simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* static_cmd = app.add_subcommand("static", "Evolve patterns against a static object");
  auto* dynamic_cmd = app.add_subcommand("dynamic", "Image a moving scene with warm-started frames");
  auto* baseline_cmd = app.add_subcommand("baseline", "Correlation ghost imaging with random patterns");
  auto* sweep_cmd = app.add_subcommand("sweep-k", "Static runs over a list of k values and seeds");
  auto* ratio_cmd = app.add_subcommand("ratio", "Print the sampling ratio of a configuration");
  for (auto* cmd : {static_cmd, dynamic_cmd, baseline_cmd, sweep_cmd, ratio_cmd}) add_common(cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto start = std::chrono::steady_clock::now();
    if (*ratio_cmd) {
      segi::ConfigMap config =
          opts.config_path.empty() ? segi::ConfigMap{} : segi::ConfigMap::load(opts.config_path);
      for (const auto& kv : opts.overrides) config.set_assignment(kv);
      if (!config.contains("seed")) config.set("seed", "0");  // ratio needs no randomness
      const auto experiment = segi::load_experiment(config);
      const auto pixels = experiment.object.dims.pixel_count();
      if (experiment.mode == segi::ExperimentMode::dynamic) {
        std::printf("first frame: %s\n",
                    segi::format_ratio(segi::static_sampling_ratio(experiment.ga, pixels)).c_str());
        std::printf("per frame: %s\n", segi::format_ratio(segi::report_sampling_ratio(experiment)).c_str());
      } else {
        std::printf("%s\n", segi::format_ratio(segi::report_sampling_ratio(experiment)).c_str());
      }
      return 0;
    }

    if (*static_cmd) {
      const auto config = build_config(opts, segi::ExperimentMode::static_imaging);
      const auto report = segi::run_static(config);
      print_run(report, "static");
      std::printf("wall clock: %.3f ms per generation\n",
                  elapsed_ms(start) / std::max(1, config.ga.generations));
    } else if (*dynamic_cmd) {
      const auto config = build_config(opts, segi::ExperimentMode::dynamic);
      const auto report = segi::run_dynamic(config);
      for (std::size_t f = 0; f < report.frames.size(); ++f) {
        const std::string label = "frame " + std::to_string(f + 1);
        print_run(report.frames[f], label.c_str());
      }
      const auto generations = static_cast<double>(report.frames.size()) * std::max(1, config.ga.generations);
      std::printf("wall clock: %.3f ms per generation\n", elapsed_ms(start) / generations);
    } else if (*baseline_cmd) {
      const auto config = build_config(opts, segi::ExperimentMode::baseline);
      const auto report = segi::run_baseline(config);
      print_run(report, "baseline");
      std::printf("pearson r: %.4f\n", segi::pearson(report.object, report.raw));
    } else if (*sweep_cmd) {
      const auto config = build_config(opts, segi::ExperimentMode::sweep_k);
      const auto report = segi::run_sweep_k(config);
      for (const auto& r : report.runs) {
        const std::string label = "k=" + std::to_string(r.k) + " replicate " + std::to_string(r.replicate);
        print_run(r, label.c_str());
      }
    }
  } catch (const segi::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
