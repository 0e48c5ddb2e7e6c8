#include "segi/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "segi/correlation.hpp"
#include "segi/error.hpp"
#include "segi/filters.hpp"
#include "segi/metrics.hpp"
#include "segi/pgm.hpp"
#include "segi/random.hpp"

namespace segi {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

std::string fmt_psnr(const std::optional<double>& v, bool identical) {
  if (identical) return "inf";
  return fmt_optional(v);
}

std::string padded(int value, int width) {
  std::string s = std::to_string(value);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

std::string mode_name(PixelMode mode) { return mode == PixelMode::binary ? "binary" : "grayscale"; }

bool ssim_fits(const Image& image) { return image.width() >= 11 && image.height() >= 11; }

// -- config loading ---------------------------------------------------------

std::vector<int> indexed_groups(const ConfigMap& config, const std::string& prefix) {
  std::vector<int> ids;
  for (const auto& key : config.keys_with_prefix(prefix)) {
    const auto rest = key.substr(prefix.size());
    const auto dot = rest.find('.');
    const std::string id = rest.substr(0, dot);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(id, &used);
      if (used != id.size()) throw InvalidInput("");
    } catch (const std::exception&) {
      throw InvalidInput("config: '" + key + "' needs a numeric index after '" + prefix + "'");
    }
    if (ids.empty() || ids.back() != value) ids.push_back(value);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

int get_int_checked(const ConfigMap& c, const std::string& key, int fallback) {
  const long long v = c.get_int(key, fallback);
  if (v < -2147483647LL || v > 2147483647LL) throw InvalidInput("config: '" + key + "' out of range");
  return static_cast<int>(v);
}

int require_int(const ConfigMap& c, const std::string& key) {
  if (!c.contains(key)) throw InvalidInput("config: missing '" + key + "'");
  return get_int_checked(c, key, 0);
}

double require_double(const ConfigMap& c, const std::string& key) {
  const auto v = c.get_double(key);
  if (!v) throw InvalidInput("config: missing '" + key + "'");
  return *v;
}

std::pair<Shape, double> load_shape(const ConfigMap& c, const std::string& p) {
  const std::string kind = c.get_string(p + "kind", "");
  const double value = c.get_double(p + "value", 1.0);
  if (kind == "rectangle") {
    return {RectangleShape{require_int(c, p + "x"), require_int(c, p + "y"), require_int(c, p + "w"),
                           require_int(c, p + "h")},
            value};
  }
  if (kind == "disk") {
    return {DiskShape{require_int(c, p + "cx"), require_int(c, p + "cy"), require_double(c, p + "radius")},
            value};
  }
  if (kind == "ring") {
    return {RingShape{require_int(c, p + "cx"), require_int(c, p + "cy"), require_double(c, p + "inner"),
                      require_double(c, p + "outer")},
            value};
  }
  if (kind == "checkerboard") return {CheckerboardShape{require_int(c, p + "cell")}, value};
  throw InvalidInput("config: '" + p + "kind' must be rectangle, disk, ring or checkerboard");
}

MotionPhase load_phase(const ConfigMap& c, const std::string& p, Dims dims) {
  MotionPhase phase;
  phase.frame_count = require_int(c, p + "frames");
  const std::string kind = c.get_string(p + "kind", "");
  if (kind == "translate") {
    phase.transform = Translate{c.get_double(p + "dx", 0.0), c.get_double(p + "dy", 0.0)};
  } else if (kind == "rotate") {
    phase.transform = Rotate{require_double(c, p + "degrees"),
                             c.get_double(p + "cx", (dims.width - 1) / 2.0),
                             c.get_double(p + "cy", (dims.height - 1) / 2.0)};
  } else {
    throw InvalidInput("config: '" + p + "kind' must be translate or rotate");
  }
  return phase;
}

ResultRule parse_result_rule(const std::string& text) {
  if (text == "best") return ResultRule::best_member();
  if (text.rfind("top:", 0) == 0) {
    try {
      return ResultRule::mean_of_top(std::stoi(text.substr(4)));
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput("config: ga.result must be 'best' or 'top:<q>', got '" + text + "'");
}

const char* frame_start_name(FrameStart f) {
  switch (f) {
    case FrameStart::warm_refresh: return "refresh";
    case FrameStart::warm_stale: return "stale";
    case FrameStart::cold: return "off";
  }
  return "?";
}

FrameStart parse_frame_start(const std::string& text) {
  if (text == "refresh") return FrameStart::warm_refresh;
  if (text == "stale") return FrameStart::warm_stale;
  if (text == "off") return FrameStart::cold;
  throw InvalidInput("config: scene.warm_start must be refresh, stale or off");
}

std::string result_rule_name(const ResultRule& r) {
  return r.kind == ResultRule::Kind::best_member ? "best" : "top:" + std::to_string(r.q);
}

// -- outputs ----------------------------------------------------------------

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "mode = " << to_string(c.mode) << "\n";
  o << "seed = " << (c.seed ? std::to_string(*c.seed) : "") << "\n";
  if (c.object.file) o << "object.file = " << c.object.file->string() << "\n";
  o << "object.width = " << c.object.dims.width << "\n";
  o << "object.height = " << c.object.dims.height << "\n";
  o << "object.shapes = " << c.object.shapes.size() << "\n";
  o << "ga.population = " << c.ga.population << "\n";
  o << "ga.generations = " << c.ga.generations << "\n";
  o << "ga.offspring = " << c.ga.offspring << "\n";
  o << "ga.k = " << c.ga.k << "\n";
  o << "ga.mode = " << mode_name(c.ga.mode) << "\n";
  o << "ga.mutation_initial = " << fmt_double(c.ga.mutation_initial) << "\n";
  o << "ga.mutation_final = " << fmt_double(c.ga.mutation_final) << "\n";
  o << "ga.mutation_decay = " << fmt_double(c.ga.mutation_decay) << "\n";
  o << "ga.fill = " << fmt_double(c.ga.fill) << "\n";
  o << "ga.result = " << result_rule_name(c.ga.result_rule) << "\n";
  o << "noise.kind = " << (c.noise.active() ? "gaussian" : "none") << "\n";
  if (c.noise.active()) o << "noise.sigma = " << fmt_double(c.noise.sigma) << "\n";
  o << "filter = " << c.filter.to_string() << "\n";
  if (!c.denoise_cmd.empty()) o << "denoise_cmd = " << c.denoise_cmd << "\n";
  o << "snapshot_every = " << c.snapshot_every << "\n";
  o << "metrics_every = " << c.metrics_every << "\n";
  if (c.mode == ExperimentMode::dynamic) {
    o << "scene.phases = " << c.scene_phases.size() << "\n";
    o << "scene.warm_start = " << frame_start_name(c.frame_start) << "\n";
  }
  if (c.mode == ExperimentMode::baseline) o << "baseline.measurements = " << c.baseline_measurements << "\n";
  if (c.mode == ExperimentMode::sweep_k) {
    o << "sweep.k =";
    for (std::size_t i = 0; i < c.sweep_k.size(); ++i) o << (i ? "," : " ") << c.sweep_k[i];
    o << "\nsweep.seeds = " << c.sweep_seeds << "\n";
  }
  return o.str();
}

std::string describe_metrics(const FinalMetrics& m) {
  std::ostringstream o;
  o << "psnr_raw_db = " << fmt_psnr(m.psnr_raw, m.raw_identical) << "\n";
  o << "psnr_filtered_db = " << fmt_psnr(m.psnr_filtered, m.filtered_identical) << "\n";
  o << "ssim_raw = " << fmt_double(m.ssim_raw) << "\n";
  o << "ssim_filtered = " << fmt_double(m.ssim_filtered) << "\n";
  return o.str();
}

// -- running ----------------------------------------------------------------

Image apply_post(const ExperimentConfig& c, const Image& raw, const fs::path& work_dir) {
  if (!c.denoise_cmd.empty()) {
    return run_external_denoiser(c.denoise_cmd, raw, work_dir.empty() ? fs::temp_directory_path() : work_dir);
  }
  return c.filter.apply(raw);
}

FinalMetrics final_metrics(const Image& truth, const Image& raw, const Image& filtered) {
  FinalMetrics m;
  m.psnr_raw = psnr(truth, raw);
  m.raw_identical = !m.psnr_raw;
  m.psnr_filtered = psnr(truth, filtered);
  m.filtered_identical = !m.psnr_filtered;
  if (ssim_fits(truth)) {
    m.ssim_raw = ssim(truth, raw);
    m.ssim_filtered = ssim(truth, filtered);
  }
  return m;
}

GenerationObserver metrics_observer(const ExperimentConfig& c, const Image& truth) {
  const int every = c.metrics_every;
  if (every <= 0) return {};
  return [&c, &truth, every](const GaState& state, GenerationRecord& rec) {
    if (rec.generation % every != 0) return;
    const Image raw = result_image(state.population, c.ga.result_rule);
    const Image filtered = c.filter.apply(raw);
    rec.psnr_raw = psnr(truth, raw).value_or(INFINITY);
    rec.psnr_filtered = psnr(truth, filtered).value_or(INFINITY);
    if (ssim_fits(truth)) {
      rec.ssim_raw = ssim(truth, raw);
      rec.ssim_filtered = ssim(truth, filtered);
    }
  };
}

// Runs the GA on one object from a given state and fills a report. Files go
// to `dir` under `stem` names when `dir` is nonempty.
RunReport finish_run(const ExperimentConfig& c, const Image& object, EvolutionTrace trace,
                     const fs::path& dir, const std::string& stem) {
  RunReport r;
  r.k = c.ga.k;
  r.object = object;
  r.pixel_count = object.size();
  r.total_measurements = trace.final_state.frame_measurements;
  r.sampling_ratio = sampling_ratio_percent(r.total_measurements, r.pixel_count);
  r.best_cf = trace.records.back().best_cf;
  r.initial_best_cf = trace.records.front().best_cf;
  r.raw = trace.result;
  r.filtered = apply_post(c, r.raw, dir);
  r.metrics = final_metrics(object, r.raw, r.filtered);
  for (auto& [g, img] : trace.snapshots) r.snapshots.emplace_back(g, quantize_8bit(img));
  r.trace = std::move(trace.records);

  if (!dir.empty()) {
    fs::create_directories(dir);
    write_pgm(dir / (stem + "object.pgm"), object);
    write_pgm(dir / (stem + "result_raw.pgm"), r.raw);
    write_pgm(dir / (stem + "result_filtered.pgm"), r.filtered);
    r.trace_csv = dir / (stem + "trace.csv");
    write_trace_csv(r.trace_csv, r.trace);
    if (!r.snapshots.empty()) {
      const fs::path snap_dir = dir / (stem + "snapshots");
      fs::create_directories(snap_dir);
      for (const auto& [g, img] : r.snapshots) {
        const fs::path p = snap_dir / ("gen_" + padded(g, 6) + ".pgm");
        write_pgm(p, img);
        r.snapshot_paths.push_back(p);
      }
    }
  }
  return r;
}

RunReport run_single(const ExperimentConfig& c, const Image& object, std::uint64_t experiment,
                     const fs::path& dir) {
  Rng rng(substream_seed(*c.seed, experiment, 0));
  auto trace = evolve(c.ga, object, c.noise, rng, c.snapshot_every, metrics_observer(c, object));
  RunReport r = finish_run(c, object, std::move(trace), dir, "");
  if (!dir.empty()) {
    write_text(dir / "summary.txt", describe(c) + "sampling_ratio = " + format_ratio(r.sampling_ratio) +
                                         "\ntotal_measurements = " + std::to_string(r.total_measurements) +
                                         "\nbest_cf = " + fmt_double(r.best_cf) + "\n" +
                                         describe_metrics(r.metrics));
  }
  return r;
}

void require_mode(const ExperimentConfig& c, ExperimentMode mode) {
  if (c.mode != mode) {
    throw InvalidInput(std::string("experiment mode is '") + to_string(c.mode) + "', expected '" +
                       to_string(mode) + "'");
  }
}

}  // namespace

const char* to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::static_imaging: return "static";
    case ExperimentMode::dynamic: return "dynamic";
    case ExperimentMode::baseline: return "baseline";
    case ExperimentMode::sweep_k: return "sweep-k";
  }
  return "?";
}

ExperimentMode parse_mode(const std::string& text) {
  if (text == "static") return ExperimentMode::static_imaging;
  if (text == "dynamic") return ExperimentMode::dynamic;
  if (text == "baseline") return ExperimentMode::baseline;
  if (text == "sweep-k") return ExperimentMode::sweep_k;
  throw InvalidInput("unknown mode '" + text + "'");
}

FilterSpec FilterSpec::parse(const std::string& text) {
  if (text == "none") return {Kind::none, 1.0};
  if (text == "median") return {Kind::median, 1.0};
  if (text.rfind("gaussian:", 0) == 0) {
    const std::string arg = text.substr(9);
    double sigma = 0.0;
    try {
      std::size_t used = 0;
      sigma = std::stod(arg, &used);
      if (used != arg.size()) sigma = 0.0;
    } catch (const std::exception&) {
      sigma = 0.0;
    }
    if (!(sigma > 0.0)) throw InvalidInput("gaussian filter needs a positive sigma, got '" + arg + "'");
    return {Kind::gaussian, sigma};
  }
  throw InvalidInput("filter must be none, median or gaussian:<sigma>, got '" + text + "'");
}

std::string FilterSpec::to_string() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::median: return "median";
    case Kind::gaussian: return "gaussian:" + fmt_double(sigma);
  }
  return "?";
}

Image FilterSpec::apply(const Image& image) const {
  switch (kind) {
    case Kind::none: return image;
    case Kind::median: return median_filter_3x3(image);
    case Kind::gaussian: return gaussian_blur(image, sigma);
  }
  return image;
}

Image ObjectSpec::build() const {
  if (file) return read_pgm(*file);
  Image out(dims);
  if (shapes.empty()) {
    // Default: centered ring covering roughly 15 % of the frame.
    const int side = std::min(dims.width, dims.height);
    const RingShape ring{(dims.width - 1) / 2, (dims.height - 1) / 2, 0.22 * side, 0.31 * side};
    return make_primitive(ring, dims);
  }
  for (const auto& [shape, value] : shapes) out = overlay_max(out, make_primitive(shape, dims, value));
  return out;
}

void ExperimentConfig::validate() const {
  if (!seed) throw InvalidInput("a seed is required (config 'seed' or --seed)");
  if (snapshot_every < 0) throw InvalidInput("snapshot_every must be nonnegative");
  if (jobs < 1) throw InvalidInput("jobs must be at least 1");
  if (mode != ExperimentMode::baseline) ga.validate();
  if (mode == ExperimentMode::dynamic && scene_phases.empty()) {
    throw InvalidInput("dynamic mode needs at least one scene.phase");
  }
  for (const auto& p : scene_phases) {
    if (p.frame_count < 1) throw InvalidInput("scene phases need at least one frame");
  }
  if (mode == ExperimentMode::sweep_k) {
    if (sweep_k.empty()) throw InvalidInput("sweep.k is empty");
    if (sweep_seeds < 1) throw InvalidInput("sweep.seeds must be at least 1");
    for (int k : sweep_k) {
      if (k < 1) throw InvalidInput("sweep.k values must be positive");
    }
  }
  if (mode == ExperimentMode::baseline && baseline_measurements == 1) {
    throw InvalidInput("baseline needs at least two measurements");
  }
}

ExperimentConfig load_experiment(const ConfigMap& c) {
  ExperimentConfig e;
  e.mode = parse_mode(c.get_string("mode", "static"));
  e.seed = c.get_u64("seed");

  if (auto file = c.get_string("object.file")) e.object.file = *file;
  e.object.dims = {get_int_checked(c, "object.width", 64), get_int_checked(c, "object.height", 64)};
  for (int id : indexed_groups(c, "object.shape.")) {
    e.object.shapes.push_back(load_shape(c, "object.shape." + std::to_string(id) + "."));
  }
  if (e.object.file && !e.object.shapes.empty()) {
    throw InvalidInput("config: object.file and object.shape.* are mutually exclusive");
  }
  if (e.object.file) e.object.dims = read_pgm(*e.object.file).dims();

  const PixelMode pixel_mode = [&] {
    const std::string m = c.get_string("ga.mode", "binary");
    if (m == "binary") return PixelMode::binary;
    if (m == "grayscale") return PixelMode::grayscale;
    throw InvalidInput("config: ga.mode must be binary or grayscale");
  }();
  e.ga = GaConfig::defaults(get_int_checked(c, "ga.population", 30), pixel_mode);
  e.ga.generations = get_int_checked(c, "ga.generations", e.ga.generations);
  e.ga.offspring = get_int_checked(c, "ga.offspring", e.ga.offspring);
  e.ga.k = get_int_checked(c, "ga.k", e.ga.k);
  e.ga.mutation_initial = c.get_double("ga.mutation_initial", e.ga.mutation_initial);
  e.ga.mutation_final = c.get_double("ga.mutation_final", e.ga.mutation_final);
  e.ga.mutation_decay = c.get_double("ga.mutation_decay", e.ga.mutation_decay);
  e.ga.fill = c.get_double("ga.fill", e.ga.fill);
  e.ga.result_rule = parse_result_rule(c.get_string("ga.result", "best"));

  const std::string noise = c.get_string("noise.kind", "none");
  if (noise == "gaussian") {
    e.noise = NoiseModel::gaussian(c.get_double("noise.sigma", 0.0));
  } else if (noise != "none") {
    throw InvalidInput("config: noise.kind must be none or gaussian");
  } else {
    c.get_double("noise.sigma");  // ignored when noise is off
  }

  for (int id : indexed_groups(c, "scene.phase.")) {
    e.scene_phases.push_back(load_phase(c, "scene.phase." + std::to_string(id) + ".", e.object.dims));
  }
  e.frame_start = parse_frame_start(c.get_string("scene.warm_start", "refresh"));

  e.snapshot_every = get_int_checked(c, "snapshot_every", 0);
  e.metrics_every = get_int_checked(c, "metrics_every", 1);
  e.output_dir = c.get_string("output", "");
  e.filter = FilterSpec::parse(c.get_string("filter", "median"));
  e.denoise_cmd = c.get_string("denoise_cmd", "");
  e.jobs = get_int_checked(c, "jobs", 1);

  if (auto ks = c.get_string("sweep.k")) {
    e.sweep_k.clear();
    for (const auto& part : split(*ks, ',')) {
      try {
        e.sweep_k.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw InvalidInput("config: sweep.k must be a comma-separated list of integers");
      }
    }
  }
  e.sweep_seeds = get_int_checked(c, "sweep.seeds", 1);
  const long long n = c.get_int("baseline.measurements", 0);
  if (n < 0) throw InvalidInput("config: baseline.measurements must be nonnegative");
  e.baseline_measurements = static_cast<std::size_t>(n);

  c.require_all_used();
  return e;
}

double sampling_ratio_percent(std::uint64_t measurements, std::uint64_t pixels) {
  if (pixels == 0) throw InvalidInput("sampling ratio of an empty image");
  return 100.0 * static_cast<double>(measurements) / static_cast<double>(pixels);
}

double static_sampling_ratio(const GaConfig& ga, std::uint64_t pixels) {
  return sampling_ratio_percent(static_cast<std::uint64_t>(ga.population) +
                                    static_cast<std::uint64_t>(ga.generations) *
                                        static_cast<std::uint64_t>(ga.offspring),
                                pixels);
}

double dynamic_frame_sampling_ratio(const GaConfig& ga, std::uint64_t pixels,
                                    WarmStartPolicy policy) {
  return sampling_ratio_percent(continuation_measurements(ga, policy), pixels);
}

std::string format_ratio(double percent) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", percent);
  return buf;
}

double report_sampling_ratio(const ExperimentConfig& config) {
  const std::uint64_t pixels = config.object.dims.pixel_count();
  switch (config.mode) {
    case ExperimentMode::dynamic:
      switch (config.frame_start) {
        case FrameStart::warm_refresh: return dynamic_frame_sampling_ratio(config.ga, pixels);
        case FrameStart::warm_stale:
          return dynamic_frame_sampling_ratio(config.ga, pixels, WarmStartPolicy::stale);
        case FrameStart::cold: break;
      }
      return static_sampling_ratio(config.ga, pixels);
    case ExperimentMode::baseline:
      return sampling_ratio_percent(
          config.baseline_measurements ? config.baseline_measurements : 10 * pixels, pixels);
    case ExperimentMode::static_imaging:
    case ExperimentMode::sweep_k:
      break;
  }
  return static_sampling_ratio(config.ga, pixels);
}

void write_trace_csv(const fs::path& path, const std::vector<GenerationRecord>& records) {
  std::ostringstream o;
  o << kTraceHeader << "\n";
  for (const auto& r : records) {
    if (r.generation < 1) continue;
    o << r.generation << ',' << fmt_double(r.best_cf) << ',' << fmt_double(r.mean_cf) << ','
      << r.cumulative_measurements << ',' << fmt_optional(r.psnr_raw) << ','
      << fmt_optional(r.psnr_filtered) << ',' << fmt_optional(r.ssim_raw) << ','
      << fmt_optional(r.ssim_filtered) << "\n";
  }
  write_text(path, o.str());
}

Image run_external_denoiser(const std::string& command_template, const Image& raw,
                            const fs::path& work_dir) {
  fs::create_directories(work_dir);
  const fs::path in = work_dir / "denoise_in.pgm";
  const fs::path out = work_dir / "denoise_out.pgm";
  write_pgm(in, raw);
  fs::remove(out);

  std::string cmd = command_template;
  auto replace_all = [&cmd](const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = cmd.find(from, pos)) != std::string::npos; pos += to.size()) {
      cmd.replace(pos, from.size(), to);
    }
  };
  replace_all("{in}", "'" + in.string() + "'");
  replace_all("{out}", "'" + out.string() + "'");

  const int status = std::system(cmd.c_str());
  if (status != 0) throw std::runtime_error("denoiser command failed (status " + std::to_string(status) + "): " + cmd);
  Image result = read_pgm(out);
  if (!result.same_dims(raw)) throw std::runtime_error("denoiser changed the image dimensions");
  fs::remove(in);
  fs::remove(out);
  return result;
}

RunReport run_static(const ExperimentConfig& config) {
  require_mode(config, ExperimentMode::static_imaging);
  config.validate();
  const Image object = config.object.build();
  return run_single(config, object, 0, config.output_dir);
}

DynamicReport run_dynamic(const ExperimentConfig& config) {
  require_mode(config, ExperimentMode::dynamic);
  config.validate();
  const Image base = config.object.build();
  const FrameSeries frames = generate_frames(SceneSpec{base, config.scene_phases});

  const fs::path& dir = config.output_dir;
  if (!dir.empty()) {
    fs::create_directories(dir / "frames");
    fs::create_directories(dir / "traces");
  }

  DynamicReport report;
  std::optional<GaState> carried;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const int frame_no = static_cast<int>(f) + 1;
    const Image& object = frames[f];
    Rng rng(substream_seed(*config.seed, 0, static_cast<std::uint64_t>(frame_no)));
    EvolutionTrace trace;
    const GenerationObserver observer = metrics_observer(config, object);
    if (carried && config.frame_start != FrameStart::cold) {
      const auto policy = config.frame_start == FrameStart::warm_refresh ? WarmStartPolicy::refresh
                                                                         : WarmStartPolicy::stale;
      trace = evolve_frame(std::move(*carried), object, policy, config.ga, config.noise, rng,
                           config.snapshot_every, observer);
    } else {
      trace = evolve(config.ga, object, config.noise, rng, config.snapshot_every, observer);
    }
    carried = trace.final_state;

    const std::string stem = "frame_" + padded(frame_no, 4) + "_";
    RunReport r = finish_run(config, object, std::move(trace), dir.empty() ? fs::path{} : dir / "frames", stem);
    if (!dir.empty()) {
      // Keep the per-generation traces together.
      const fs::path moved = dir / "traces" / ("frame_" + padded(frame_no, 4) + ".csv");
      fs::rename(r.trace_csv, moved);
      r.trace_csv = moved;
    }
    report.frames.push_back(std::move(r));
  }

  if (!dir.empty()) {
    std::ostringstream o;
    o << "frame,frame_measurements,cum_measurements,sampling_ratio,best_cf,mean_cf,psnr_raw,"
         "psnr_filtered,ssim_raw,ssim_filtered\n";
    std::uint64_t cum = 0;
    for (std::size_t f = 0; f < report.frames.size(); ++f) {
      const auto& r = report.frames[f];
      cum += r.total_measurements;
      o << f + 1 << ',' << r.total_measurements << ',' << cum << ',' << fmt_double(r.sampling_ratio) << ','
        << fmt_double(r.best_cf) << ',' << fmt_double(r.trace.back().mean_cf) << ','
        << fmt_psnr(r.metrics.psnr_raw, r.metrics.raw_identical) << ','
        << fmt_psnr(r.metrics.psnr_filtered, r.metrics.filtered_identical) << ','
        << fmt_double(r.metrics.ssim_raw) << ',' << fmt_double(r.metrics.ssim_filtered) << "\n";
    }
    report.frames_csv = dir / "frames.csv";
    write_text(report.frames_csv, o.str());

    std::ostringstream s;
    s << describe(config) << "frames = " << report.frames.size() << "\n"
      << "sampling_ratio_first_frame = " << format_ratio(report.frames.front().sampling_ratio) << "\n"
      << "sampling_ratio_per_frame = "
      << format_ratio(report.frames.size() > 1 ? report.frames[1].sampling_ratio
                                               : report.frames.front().sampling_ratio)
      << "\n"
      << "total_measurements = " << cum << "\n"
      << "final_frame:\n"
      << describe_metrics(report.frames.back().metrics);
    write_text(dir / "summary.txt", s.str());
  }
  return report;
}

RunReport run_baseline(const ExperimentConfig& config) {
  require_mode(config, ExperimentMode::baseline);
  config.validate();
  const Image object = config.object.build();
  const std::size_t n =
      config.baseline_measurements ? config.baseline_measurements : 10 * object.size();
  Rng rng(substream_seed(*config.seed, 0, 0));
  auto gi = run_traditional_gi(object, n, config.noise, rng, false);

  RunReport r;
  r.object = object;
  r.pixel_count = object.size();
  r.total_measurements = n;
  r.sampling_ratio = sampling_ratio_percent(n, r.pixel_count);
  r.raw = gi.image.normalized;
  const fs::path& dir = config.output_dir;
  r.filtered = apply_post(config, r.raw, dir);
  r.metrics = final_metrics(object, r.raw, r.filtered);

  if (!dir.empty()) {
    fs::create_directories(dir);
    write_pgm(dir / "object.pgm", object);
    write_pgm(dir / "result_raw.pgm", r.raw);
    write_pgm(dir / "result_filtered.pgm", r.filtered);
    std::ostringstream o;
    o << "index,signal\n";
    for (std::size_t i = 0; i < gi.measurements.signals.size(); ++i) {
      o << i + 1 << ',' << fmt_double(gi.measurements.signals[i].value) << "\n";
    }
    r.trace_csv = dir / "signals.csv";
    write_text(r.trace_csv, o.str());
    write_text(dir / "summary.txt", describe(config) + "sampling_ratio = " + format_ratio(r.sampling_ratio) +
                                        "\ntotal_measurements = " + std::to_string(n) +
                                        "\npearson = " + fmt_double(pearson(object, r.raw)) + "\n" +
                                        describe_metrics(r.metrics));
  }
  return r;
}

SweepReport run_sweep_k(const ExperimentConfig& config) {
  require_mode(config, ExperimentMode::sweep_k);
  config.validate();
  const Image object = config.object.build();
  const fs::path& dir = config.output_dir;
  if (!dir.empty()) fs::create_directories(dir);

  struct Task {
    int k;
    int replicate;
  };
  std::vector<Task> tasks;
  for (int k : config.sweep_k)
    for (int rep = 0; rep < config.sweep_seeds; ++rep) tasks.push_back({k, rep});

  std::vector<RunReport> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        ExperimentConfig run = config;
        run.mode = ExperimentMode::static_imaging;
        run.ga.k = tasks[i].k;
        const fs::path sub = dir.empty() ? fs::path{}
                                         : dir / ("k" + std::to_string(tasks[i].k) + "_r" +
                                                  std::to_string(tasks[i].replicate));
        // Replicate index alone picks the substream, so every k sees the
        // same random stream for a given replicate.
        results[i] = run_single(run, object, static_cast<std::uint64_t>(tasks[i].replicate), sub);
        results[i].k = tasks[i].k;
        results[i].replicate = tasks[i].replicate;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::min<std::size_t>(config.jobs, tasks.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  SweepReport report;
  report.runs = std::move(results);
  if (!dir.empty()) {
    std::ostringstream o;
    o << "k,replicate," << kTraceHeader << "\n";
    for (const auto& r : report.runs) {
      for (const auto& rec : r.trace) {
        if (rec.generation < 1) continue;
        o << r.k << ',' << r.replicate << ',' << rec.generation << ',' << fmt_double(rec.best_cf) << ','
          << fmt_double(rec.mean_cf) << ',' << rec.cumulative_measurements << ','
          << fmt_optional(rec.psnr_raw) << ',' << fmt_optional(rec.psnr_filtered) << ','
          << fmt_optional(rec.ssim_raw) << ',' << fmt_optional(rec.ssim_filtered) << "\n";
      }
    }
    report.sweep_csv = dir / "sweep.csv";
    write_text(report.sweep_csv, o.str());
  }
  return report;
}

}  // namespace segi
