#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "segi/config.hpp"
#include "segi/error.hpp"
#include "segi/experiment.hpp"
#include "segi/pgm.hpp"

using namespace segi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("segi_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

GaConfig ga(int n, int m, int g) {
  GaConfig c = GaConfig::defaults(n);
  c.offspring = m;
  c.generations = g;
  return c;
}

ExperimentConfig small_experiment(const std::string& extra = "") {
  return load_experiment(ConfigMap::parse("seed = 7\n"
                                          "object.width = 24\n"
                                          "object.height = 24\n"
                                          "object.shape.1.kind = ring\n"
                                          "object.shape.1.cx = 12\n"
                                          "object.shape.1.cy = 12\n"
                                          "object.shape.1.inner = 5\n"
                                          "object.shape.1.outer = 8\n"
                                          "ga.population = 10\n"
                                          "ga.generations = 25\n" +
                                          extra));
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), a));
  std::size_t other = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) other += e.is_regular_file() ? 1 : 0;
  if (files.size() != other || files.empty()) return false;
  for (const auto& f : files)
    if (slurp(a / f) != slurp(b / f)) return false;
  return true;
}

}  // namespace

TEST(SamplingRatio, PublishedSettings) {
  EXPECT_EQ(format_ratio(static_sampling_ratio(ga(20, 10, 500), 48 * 48)), "217.9%");
  EXPECT_EQ(format_ratio(static_sampling_ratio(ga(100, 50, 300), 4096)), "368.7%");
  EXPECT_EQ(format_ratio(static_sampling_ratio(ga(40, 20, 200), 4096)), "98.6%");
  EXPECT_EQ(format_ratio(static_sampling_ratio(ga(30, 15, 1000), 4096)), "366.9%");
  EXPECT_EQ(format_ratio(dynamic_frame_sampling_ratio(ga(100, 50, 200), 4096)), "244.1%");
  EXPECT_EQ(format_ratio(dynamic_frame_sampling_ratio(ga(30, 15, 100), 4096)), "36.6%");
  EXPECT_EQ(format_ratio(dynamic_frame_sampling_ratio(ga(30, 15, 100), 4096, WarmStartPolicy::stale)),
            "36.6%");
  EXPECT_DOUBLE_EQ(static_sampling_ratio(ga(30, 15, 0), 4096), 30.0 / 4096.0 * 100.0);
}

TEST(ConfigMap, ParsesCommentsAndOverrides) {
  auto c = ConfigMap::parse("# header\na = 1\nb.c = two words  # trailing\n\na = 3\n");
  EXPECT_EQ(c.get_int("a", 0), 3);
  EXPECT_EQ(c.get_string("b.c", ""), "two words");
  c.set_assignment("a=5");
  EXPECT_EQ(c.get_int("a", 0), 5);
  EXPECT_THROW(c.set_assignment("novalue"), InvalidInput);
  EXPECT_THROW(ConfigMap::parse("just text\n"), InvalidInput);
}

TEST(ConfigMap, TypedGettersRejectMalformed) {
  const auto c = ConfigMap::parse("n = 12x\nd = 0.5\nb = yes\n");
  EXPECT_THROW(c.get_int("n"), InvalidInput);
  EXPECT_DOUBLE_EQ(*c.get_double("d"), 0.5);
  EXPECT_FALSE(c.get_int("missing").has_value());
}

TEST(LoadExperiment, RejectsUnknownKeysAndMissingSeed) {
  EXPECT_THROW(load_experiment(ConfigMap::parse("seed = 1\nga.populaton = 30\n")), InvalidInput);
  EXPECT_THROW(run_static(load_experiment(ConfigMap::parse("ga.generations = 1\n"))), InvalidInput);
  EXPECT_THROW(load_experiment(ConfigMap::parse("seed = 1\nga.offspring = 30\n")).validate(), InvalidInput);
}

TEST(LoadExperiment, DefaultsAndPhases) {
  const auto e = load_experiment(ConfigMap::parse("seed = 1\nmode = dynamic\n"
                                                  "scene.phase.1.kind = translate\n"
                                                  "scene.phase.1.frames = 40\n"
                                                  "scene.phase.1.dx = 0.5\n"
                                                  "scene.phase.2.kind = rotate\n"
                                                  "scene.phase.2.frames = 28\n"
                                                  "scene.phase.2.degrees = 1\n"));
  EXPECT_EQ(e.mode, ExperimentMode::dynamic);
  EXPECT_EQ(e.ga.population, 30);
  EXPECT_EQ(e.ga.offspring, 15);
  EXPECT_EQ(e.object.dims.pixel_count(), 4096u);
  ASSERT_EQ(e.scene_phases.size(), 2u);
  EXPECT_EQ(e.scene_phases[0].frame_count, 40);
  EXPECT_EQ(e.frame_start, FrameStart::warm_refresh);
  EXPECT_EQ(e.filter.kind, FilterSpec::Kind::median);
  const Image object = e.object.build();
  EXPECT_TRUE(object.is_binary());
  EXPECT_NEAR(object.sum() / 4096.0, 0.15, 0.02);
}

TEST(FilterSpec, Parse) {
  EXPECT_EQ(FilterSpec::parse("none").kind, FilterSpec::Kind::none);
  const auto g = FilterSpec::parse("gaussian:1.5");
  EXPECT_EQ(g.kind, FilterSpec::Kind::gaussian);
  EXPECT_DOUBLE_EQ(g.sigma, 1.5);
  EXPECT_THROW(FilterSpec::parse("gaussian:-1"), InvalidInput);
  EXPECT_THROW(FilterSpec::parse("bilateral"), InvalidInput);
}

TEST(RunStatic, WritesOutputsWithExpectedRows) {
  const fs::path dir = scratch("static");
  auto e = small_experiment("snapshot_every = 5\n");
  e.output_dir = dir;
  const auto r = run_static(e);
  EXPECT_EQ(r.total_measurements, 10u + 25u * 5u);
  EXPECT_EQ(r.sampling_ratio, 135.0 / 576.0 * 100.0);
  EXPECT_EQ(line_count(dir / "trace.csv"), 26u);
  std::ifstream trace(dir / "trace.csv");
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, kTraceHeader);
  int expected_gen = 1;
  for (std::string line; std::getline(trace, line); ++expected_gen) {
    const auto first = line.find(',');
    EXPECT_EQ(std::stoi(line.substr(0, first)), expected_gen);
    const auto cum = std::stoull(line.substr(line.find(',', line.find(',', first + 1) + 1) + 1));
    EXPECT_EQ(cum, 10u + static_cast<std::uint64_t>(expected_gen) * 5u);
  }
  for (const char* f : {"object.pgm", "result_raw.pgm", "result_filtered.pgm", "summary.txt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  ASSERT_EQ(r.snapshot_paths.size(), 5u);
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    EXPECT_EQ(read_pgm(r.snapshot_paths[i]), r.snapshots[i].second);
  }
  EXPECT_EQ(read_pgm(dir / "result_raw.pgm"), r.raw);
  fs::remove_all(dir);
}

TEST(RunStatic, SameSeedSameBytes) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  auto e = small_experiment("snapshot_every = 10\nnoise.kind = gaussian\nnoise.sigma = 0.05\n");
  e.output_dir = a;
  run_static(e);
  e.output_dir = b;
  run_static(e);
  EXPECT_TRUE(same_tree(a, b));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunSweep, DegenerateSweepEqualsStatic) {
  const auto stat = run_static(small_experiment());
  auto e = small_experiment("mode = sweep-k\nsweep.k = 1\n");
  const auto sweep = run_sweep_k(e);
  ASSERT_EQ(sweep.runs.size(), 1u);
  EXPECT_EQ(sweep.runs[0].raw, stat.raw);
  EXPECT_EQ(sweep.runs[0].best_cf, stat.best_cf);
}

TEST(RunSweep, CsvRowsAndParallelDeterminism) {
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  auto e = small_experiment("mode = sweep-k\nsweep.k = 1,2,4\nsweep.seeds = 2\n");
  e.output_dir = a;
  e.jobs = 1;
  const auto serial = run_sweep_k(e);
  e.output_dir = b;
  e.jobs = 4;
  const auto parallel = run_sweep_k(e);
  EXPECT_EQ(line_count(a / "sweep.csv"), 1u + 3u * 2u * 25u);
  EXPECT_TRUE(same_tree(a, b));
  ASSERT_EQ(serial.runs.size(), 6u);
  EXPECT_EQ(serial.runs[0].k, 1);
  EXPECT_EQ(serial.runs[5].k, 4);
  EXPECT_EQ(serial.runs[5].replicate, 1);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunDynamic, FrameAccountingAndFiles) {
  const fs::path dir = scratch("dynamic");
  auto e = small_experiment("mode = dynamic\n"
                            "scene.phase.1.kind = translate\n"
                            "scene.phase.1.frames = 3\n"
                            "scene.phase.1.dx = 1\n");
  e.output_dir = dir;
  const auto r = run_dynamic(e);
  ASSERT_EQ(r.frames.size(), 3u);
  EXPECT_EQ(r.frames[0].total_measurements, 10u + 25u * 5u);
  EXPECT_EQ(r.frames[1].total_measurements, 125u);
  EXPECT_EQ(r.frames[2].total_measurements, 125u);
  EXPECT_EQ(line_count(dir / "frames.csv"), 4u);
  EXPECT_TRUE(fs::exists(dir / "frames" / "frame_0003_result_raw.pgm"));
  EXPECT_TRUE(fs::exists(dir / "traces" / "frame_0002.csv"));
  fs::remove_all(dir);
}

TEST(RunDynamic, IdenticalFramesKeepBestCf) {
  auto e = small_experiment("mode = dynamic\n"
                            "scene.phase.1.kind = translate\n"
                            "scene.phase.1.frames = 2\n");
  for (const char* policy : {"refresh", "stale"}) {
    auto run = e;
    run.frame_start = std::string(policy) == "refresh" ? FrameStart::warm_refresh : FrameStart::warm_stale;
    const auto r = run_dynamic(run);
    EXPECT_GE(r.frames[1].best_cf, r.frames[0].best_cf) << policy;
  }
}

TEST(RunDynamic, SameSeedSameBytes) {
  const fs::path a = scratch("dyn_a"), b = scratch("dyn_b");
  auto e = small_experiment("mode = dynamic\n"
                            "scene.phase.1.kind = rotate\n"
                            "scene.phase.1.frames = 3\n"
                            "scene.phase.1.degrees = 5\n");
  e.output_dir = a;
  run_dynamic(e);
  e.output_dir = b;
  run_dynamic(e);
  EXPECT_TRUE(same_tree(a, b));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunBaseline, RatioAndSignals) {
  const fs::path dir = scratch("baseline");
  auto e = small_experiment("mode = baseline\n");
  e.output_dir = dir;
  const auto r = run_baseline(e);
  EXPECT_EQ(r.total_measurements, 5760u);
  EXPECT_DOUBLE_EQ(r.sampling_ratio, 1000.0);
  EXPECT_EQ(line_count(dir / "signals.csv"), 5761u);
  fs::remove_all(dir);
}

TEST(Denoiser, ExternalCommandRoundTrip) {
  const fs::path dir = scratch("denoise");
  const Image raw = quantize_8bit(Image::from_rows({{0.0, 0.5, 1.0}, {0.25, 0.75, 0.1}}));
  EXPECT_EQ(run_external_denoiser("cp {in} {out}", raw, dir), raw);
  EXPECT_THROW(run_external_denoiser("false", raw, dir), std::runtime_error);
  fs::remove_all(dir);
}

#ifdef SEGI_CLI_PATH
TEST(Cli, RatioAndExitCodes) {
  const fs::path out = scratch("cli") / "ratio.txt";
  fs::create_directories(out.parent_path());
  const std::string cli = SEGI_CLI_PATH;
  const std::string ratio = cli + " ratio --set ga.population=100 --set ga.generations=300 > " + out.string();
  ASSERT_EQ(std::system(ratio.c_str()), 0);
  EXPECT_EQ(slurp(out), "368.7%\n");
  const std::string bad = cli + " static --seed 1 --set ga.offspring=40 > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
  fs::remove_all(out.parent_path());
}
#endif
