#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "segi/forward_model.hpp"
#include "segi/image.hpp"
#include "segi/random.hpp"

namespace segi {

/// How the reported image is derived from a ranked population.
struct ResultRule {
  enum class Kind { best_member, mean_of_top };

  Kind kind = Kind::best_member;
  int q = 1;

  static ResultRule best_member() { return {}; }
  static ResultRule mean_of_top(int q) { return {Kind::mean_of_top, q}; }
};

/// Genetic-algorithm hyperparameters.
struct GaConfig {
  int population = 30;        ///< N
  int generations = 1000;     ///< G
  int offspring = 15;         ///< M, replaced per generation
  int k = 1;                  ///< exponent on the bucket signal
  PixelMode mode = PixelMode::binary;
  double mutation_initial = 0.1;
  double mutation_final = 0.005;
  double mutation_decay = 300.0;  ///< e-folding length in generations
  double fill = 0.5;              ///< Bernoulli fill of fresh binary patterns
  ResultRule result_rule;

  /// Defaults for a population size: M = N/2 (rounded down), k = 1 for
  /// binary and k = 2 for grayscale.
  static GaConfig defaults(int population, PixelMode mode = PixelMode::binary);

  /// Throws InvalidInput on any violated invariant.
  void validate() const;
};

/// Normalization constants taken from the initial generation.
struct CfBaseline {
  double mean_signal_pow_k = 0.0;  ///< <S^k> (binary) or <S^2> (grayscale)
  double mean_weight = 0.0;        ///< <sum I> (binary) or <sum I^2> (grayscale)
  int order = 1;                   ///< pattern-weight order: 1 binary, 2 grayscale
};

struct PopulationMember {
  Image pattern;
  BucketSignal signal;
  double cf = 0.0;
  int birth_generation = 0;
  /// Weight (order 1 or 2) cached at birth; patterns never change afterwards.
  double weight = 0.0;
};

using Population = std::vector<PopulationMember>;

/// Per-generation trace entry. Metric slots are filled by an observer when a
/// ground truth is available.
struct GenerationRecord {
  int generation = 0;
  double best_cf = 0.0;
  double mean_cf = 0.0;
  std::uint64_t cumulative_measurements = 0;
  std::optional<double> psnr_raw;
  std::optional<double> psnr_filtered;
  std::optional<double> ssim_raw;
  std::optional<double> ssim_filtered;
};

/// Everything needed to continue an evolution: the ranked population, the
/// frame-1 baseline and the counters.
struct GaState {
  Population population;  ///< ranked, best first
  CfBaseline baseline;
  int generation = 0;  ///< within the current frame
  /// Generations completed before the current frame; the mutation schedule
  /// runs on the lifetime count.
  int generation_offset = 0;
  std::uint64_t frame_measurements = 0;
  std::uint64_t total_measurements = 0;
};

struct EvolutionTrace {
  std::vector<GenerationRecord> records;  ///< generation 0 (initial) .. G
  std::vector<std::pair<int, Image>> snapshots;
  GaState final_state;
  Image result;
};

/// Invoked after initialization (generation 0) and after every generation.
/// May fill the metric slots of the record.
using GenerationObserver = std::function<void(const GaState&, GenerationRecord&)>;

// -- cost functions ---------------------------------------------------------

/// (signal^k * mean_weight) / (mean_signal_pow_k * weight); zero for an
/// all-dark pattern (weight == 0).
double cost_binary(BucketSignal signal, double weight, const CfBaseline& baseline, int k);

/// (signal^2 * mean_weight) / (mean_signal_pow_k * sq_weight) with both
/// baseline means taken at order 2; zero when sq_weight == 0.
double cost_grayscale(BucketSignal signal, double sq_weight, const CfBaseline& baseline);

/// Dispatches on config.mode.
double member_cost(BucketSignal signal, double weight, const CfBaseline& baseline,
                   const GaConfig& config);

/// Baseline from a measured initial generation. Throws DegenerateBaseline
/// when the mean signal power or the mean weight is zero.
CfBaseline make_baseline(const Population& initial, const GaConfig& config);

// -- population operators ---------------------------------------------------

/// Measures each pattern, builds the baseline and scores every member.
/// The result is ranked.
std::pair<Population, CfBaseline> init_population_from(std::vector<Image> patterns,
                                                       const Image& object,
                                                       const NoiseModel& noise,
                                                       const GaConfig& config, Rng& rng);

/// N fresh random patterns measured against the object.
std::pair<Population, CfBaseline> init_population(const GaConfig& config, const Image& object,
                                                  const NoiseModel& noise, Rng& rng);

/// Descending cf; ties keep the older member first, then the earlier
/// position in the input.
void rank(Population& population);

/// Picks two distinct members from a ranked population. Rank r (1 = best)
/// is drawn with probability (N - r + 1) / (N (N + 1) / 2); the second draw
/// repeats until it differs from the first. Returns indices (ma, pa).
std::pair<std::size_t, std::size_t> select_parents(const Population& ranked, Rng& rng);

/// Uniform crossover through a random Bernoulli(0.5) template.
Image breed(const Image& ma, const Image& pa, Rng& rng);

/// Crossover with an explicit template: ma where the template is nonzero,
/// pa elsewhere.
Image breed_with_template(const Image& ma, const Image& pa, const Image& mask);

/// (R0 - Rend) exp(-(g - 1) / lambda) + Rend for generation g >= 1.
double mutation_rate(int generation, const GaConfig& config);

/// Each pixel mutates with probability `rate`: binary pixels flip,
/// grayscale pixels are redrawn uniformly.
Image mutate(const Image& pattern, double rate, PixelMode mode, Rng& rng);

// -- evolution --------------------------------------------------------------

/// One generation: M offspring are bred and mutated from the ranked
/// population, only they are measured, and they replace the M lowest-ranked
/// members. All random draws for breeding happen before any measurement.
void step_generation(GaState& state, const Image& object, const NoiseModel& noise,
                     const GaConfig& config, Rng& rng);

/// Fresh state for a new (or static) object: initial population measured,
/// baseline fixed, counters at N.
GaState start_state(const GaConfig& config, const Image& object, const NoiseModel& noise,
                    Rng& rng);

/// How an inherited population enters a new frame.
enum class WarmStartPolicy {
  /// Re-measure the inherited patterns against the new frame before
  /// breeding. The N measurements come out of the frame's G*M budget.
  refresh,
  /// Keep the cached signals and cf values from the previous frame.
  stale,
};

/// Carries the population of the previous frame into the next one. Patterns,
/// cached signals, cf values and the baseline are kept as they are; the
/// per-frame counters reset and the mutation schedule continues from the
/// lifetime generation count. No measurements are made.
GaState warm_start(GaState previous, const Image& next_frame);

/// Re-measures every member against `object` and re-ranks. Costs N
/// measurements, counted on the state.
void refresh_population(GaState& state, const Image& object, const NoiseModel& noise,
                        const GaConfig& config, Rng& rng);

/// Breeding generations of a continuation frame: G for a stale start,
/// G - ceil(N / M) for a refreshed one (never below zero).
int continuation_generations(const GaConfig& config, WarmStartPolicy policy);

/// Measurements of a continuation frame: G*M for a stale start,
/// N + continuation_generations * M for a refreshed one. Equal to G*M when
/// M divides N and G >= N / M.
std::uint64_t continuation_measurements(const GaConfig& config, WarmStartPolicy policy);

/// Runs config.generations steps on an existing state and records the trace.
EvolutionTrace evolve_from(GaState state, const GaConfig& config, const Image& object,
                           const NoiseModel& noise, Rng& rng, int snapshot_interval = 0,
                           const GenerationObserver& observer = {});

/// One continuation frame: warm start under `policy`, then
/// continuation_generations() steps against `frame`.
EvolutionTrace evolve_frame(GaState previous, const Image& frame, WarmStartPolicy policy,
                            const GaConfig& config, const NoiseModel& noise, Rng& rng,
                            int snapshot_interval = 0, const GenerationObserver& observer = {});

/// init + G generation steps.
EvolutionTrace evolve(const GaConfig& config, const Image& object, const NoiseModel& noise,
                      Rng& rng, int snapshot_interval = 0,
                      const GenerationObserver& observer = {});

/// Image reported for a ranked population under the configured rule.
Image result_image(const Population& ranked, const ResultRule& rule);

}  // namespace segi
