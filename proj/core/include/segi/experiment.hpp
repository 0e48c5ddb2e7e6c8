#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "segi/config.hpp"
#include "segi/forward_model.hpp"
#include "segi/ga.hpp"
#include "segi/image.hpp"
#include "segi/scenes.hpp"

namespace segi {

enum class ExperimentMode { static_imaging, dynamic, baseline, sweep_k };

const char* to_string(ExperimentMode mode);
ExperimentMode parse_mode(const std::string& text);

/// Post-filter applied to raw results.
struct FilterSpec {
  enum class Kind { none, median, gaussian };

  Kind kind = Kind::median;
  double sigma = 1.0;

  /// Accepts `none`, `median` or `gaussian:<sigma>`.
  static FilterSpec parse(const std::string& text);
  std::string to_string() const;
  Image apply(const Image& image) const;
};

/// Object source: an image file, or a union of primitives on a dark frame.
struct ObjectSpec {
  std::optional<std::filesystem::path> file;
  Dims dims{64, 64};
  std::vector<std::pair<Shape, double>> shapes;  ///< shape, value

  Image build() const;
};

/// How dynamic-mode frames after the first are initialized.
enum class FrameStart { warm_refresh, warm_stale, cold };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::static_imaging;
  ObjectSpec object;
  GaConfig ga;
  std::vector<MotionPhase> scene_phases;
  FrameStart frame_start = FrameStart::warm_refresh;
  NoiseModel noise;
  std::optional<std::uint64_t> seed;
  int snapshot_every = 0;
  int metrics_every = 1;
  std::filesystem::path output_dir;  ///< empty: keep results in memory only
  FilterSpec filter;
  std::string denoise_cmd;  ///< `{in}` / `{out}` placeholders
  std::vector<int> sweep_k{1, 2, 3, 4};
  int sweep_seeds = 1;
  int jobs = 1;
  std::size_t baseline_measurements = 0;  ///< 0: ten times the pixel count

  /// Throws InvalidInput when mode-required fields are missing or invalid.
  void validate() const;
};

/// Builds an experiment from a config document. Consumes every known key
/// and rejects the rest.
ExperimentConfig load_experiment(const ConfigMap& config);

struct FinalMetrics {
  std::optional<double> psnr_raw;  ///< nullopt with `identical` set: infinite
  std::optional<double> psnr_filtered;
  double ssim_raw = 0.0;
  double ssim_filtered = 0.0;
  bool raw_identical = false;
  bool filtered_identical = false;
};

struct RunReport {
  double sampling_ratio = 0.0;  ///< percent
  std::uint64_t total_measurements = 0;
  std::uint64_t pixel_count = 0;
  std::filesystem::path trace_csv;
  std::vector<std::filesystem::path> snapshot_paths;
  std::vector<std::pair<int, Image>> snapshots;  ///< 8-bit quantized, as written
  FinalMetrics metrics;
  double best_cf = 0.0;
  double initial_best_cf = 0.0;
  std::vector<GenerationRecord> trace;
  Image object;
  Image raw;
  Image filtered;
  int k = 1;
  int replicate = 0;
};

struct DynamicReport {
  std::vector<RunReport> frames;
  std::filesystem::path frames_csv;
};

struct SweepReport {
  std::vector<RunReport> runs;  ///< ordered by k then replicate
  std::filesystem::path sweep_csv;
};

/// Percent of pixels measured: static (N + G M) / P, dynamic continuation
/// frame G M / P (see continuation_measurements), baseline n / P.
double sampling_ratio_percent(std::uint64_t measurements, std::uint64_t pixels);
double static_sampling_ratio(const GaConfig& ga, std::uint64_t pixels);
double dynamic_frame_sampling_ratio(const GaConfig& ga, std::uint64_t pixels,
                                    WarmStartPolicy policy = WarmStartPolicy::refresh);
/// One decimal place, e.g. "217.9%".
std::string format_ratio(double percent);

/// Sampling ratio for the configured mode.
double report_sampling_ratio(const ExperimentConfig& config);

RunReport run_static(const ExperimentConfig& config);
DynamicReport run_dynamic(const ExperimentConfig& config);
RunReport run_baseline(const ExperimentConfig& config);
SweepReport run_sweep_k(const ExperimentConfig& config);

/// CSV header shared by every per-generation trace.
inline constexpr const char* kTraceHeader =
    "generation,best_cf,mean_cf,cum_measurements,psnr_raw,psnr_filtered,ssim_raw,ssim_filtered";

/// Writes records for generations >= 1.
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<GenerationRecord>& records);

/// Replaces `{in}` and `{out}` in `command_template`, runs it through the
/// shell and reads back the denoised image.
Image run_external_denoiser(const std::string& command_template, const Image& raw,
                            const std::filesystem::path& work_dir);

}  // namespace segi
