#include "segi/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segi/error.hpp"

namespace segi {

namespace {

int weight_order(const GaConfig& config) { return config.mode == PixelMode::binary ? 1 : 2; }

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

GenerationRecord summarize(const GaState& state) {
  GenerationRecord rec;
  rec.generation = state.generation;
  rec.best_cf = state.population.front().cf;
  double sum = 0.0;
  for (const auto& m : state.population) sum += m.cf;
  rec.mean_cf = sum / static_cast<double>(state.population.size());
  rec.cumulative_measurements = state.frame_measurements;
  return rec;
}

}  // namespace

GaConfig GaConfig::defaults(int population, PixelMode mode) {
  GaConfig c;
  c.population = population;
  c.offspring = population / 2;
  c.mode = mode;
  c.k = mode == PixelMode::binary ? 1 : 2;
  return c;
}

void GaConfig::validate() const {
  auto fail = [](const std::string& what) { throw InvalidInput("ga config: " + what); };
  if (population < 2) fail("population must be at least 2");
  if (generations < 0) fail("generations must be nonnegative");
  if (offspring < 1 || offspring > population) fail("offspring must lie in [1, population]");
  if (offspring == population) fail("offspring must leave at least one survivor");
  if (k < 1) fail("k must be a positive integer");
  if (mode == PixelMode::grayscale && k != 2) fail("grayscale cost function uses k = 2");
  if (!(mutation_initial > 0.0 && mutation_initial < 1.0)) fail("mutation_initial must lie in (0, 1)");
  if (!(mutation_final > 0.0 && mutation_final < 1.0)) fail("mutation_final must lie in (0, 1)");
  if (mutation_final > mutation_initial) fail("mutation_final must not exceed mutation_initial");
  if (!(mutation_decay > 0.0)) fail("mutation_decay must be positive");
  if (!(fill > 0.0 && fill < 1.0)) fail("fill must lie in (0, 1)");
  if (result_rule.kind == ResultRule::Kind::mean_of_top &&
      (result_rule.q < 1 || result_rule.q > population)) {
    fail("mean-of-top q must lie in [1, population]");
  }
}

double cost_binary(BucketSignal signal, double weight, const CfBaseline& baseline, int k) {
  if (weight <= 0.0) return 0.0;
  return ipow(signal.value, k) * baseline.mean_weight / (baseline.mean_signal_pow_k * weight);
}

double cost_grayscale(BucketSignal signal, double sq_weight, const CfBaseline& baseline) {
  if (baseline.order != 2) throw InvalidInput("cost_grayscale needs an order-2 baseline");
  if (sq_weight <= 0.0) return 0.0;
  return signal.value * signal.value * baseline.mean_weight /
         (baseline.mean_signal_pow_k * sq_weight);
}

double member_cost(BucketSignal signal, double weight, const CfBaseline& baseline,
                   const GaConfig& config) {
  return config.mode == PixelMode::binary ? cost_binary(signal, weight, baseline, config.k)
                                          : cost_grayscale(signal, weight, baseline);
}

CfBaseline make_baseline(const Population& initial, const GaConfig& config) {
  if (initial.empty()) throw InvalidInput("baseline needs a nonempty population");
  const int exponent = config.mode == PixelMode::binary ? config.k : 2;
  double signal_pow = 0.0;
  double weight = 0.0;
  for (const auto& m : initial) {
    signal_pow += ipow(m.signal.value, exponent);
    weight += m.weight;
  }
  const auto n = static_cast<double>(initial.size());
  CfBaseline b{signal_pow / n, weight / n, weight_order(config)};
  if (!(b.mean_signal_pow_k > 0.0)) {
    throw DegenerateBaseline("initial generation measured no light; object and patterns are disjoint");
  }
  if (!(b.mean_weight > 0.0)) throw DegenerateBaseline("initial patterns are all dark");
  return b;
}

std::pair<Population, CfBaseline> init_population_from(std::vector<Image> patterns,
                                                       const Image& object,
                                                       const NoiseModel& noise,
                                                       const GaConfig& config, Rng& rng) {
  const int order = weight_order(config);
  Population pop;
  pop.reserve(patterns.size());
  for (auto& p : patterns) {
    PopulationMember m;
    m.signal = measure_bucket(p, object, noise, rng);
    m.weight = pattern_weight(p, order);
    m.pattern = std::move(p);
    pop.push_back(std::move(m));
  }
  CfBaseline baseline = make_baseline(pop, config);
  for (auto& m : pop) m.cf = member_cost(m.signal, m.weight, baseline, config);
  rank(pop);
  return {std::move(pop), baseline};
}

std::pair<Population, CfBaseline> init_population(const GaConfig& config, const Image& object,
                                                  const NoiseModel& noise, Rng& rng) {
  config.validate();
  std::vector<Image> patterns;
  patterns.reserve(static_cast<std::size_t>(config.population));
  for (int i = 0; i < config.population; ++i) {
    patterns.push_back(random_pattern(object.dims(), config.mode, rng, config.fill));
  }
  return init_population_from(std::move(patterns), object, noise, config, rng);
}

void rank(Population& population) {
  std::stable_sort(population.begin(), population.end(),
                   [](const PopulationMember& a, const PopulationMember& b) {
                     if (a.cf != b.cf) return a.cf > b.cf;
                     return a.birth_generation < b.birth_generation;
                   });
}

std::pair<std::size_t, std::size_t> select_parents(const Population& ranked, Rng& rng) {
  const std::size_t n = ranked.size();
  if (n < 2) throw InvalidInput("parent selection needs at least two members");
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n + 1) / 2;
  auto draw = [&] {
    // Index i (rank i + 1) owns n - i tickets.
    std::uint64_t ticket = rng.below(total);
    std::size_t i = 0;
    while (ticket >= n - i) {
      ticket -= n - i;
      ++i;
    }
    return i;
  };
  const std::size_t ma = draw();
  std::size_t pa = draw();
  while (pa == ma) pa = draw();
  return {ma, pa};
}

Image breed_with_template(const Image& ma, const Image& pa, const Image& mask) {
  require_same_dims(ma, pa, "breed");
  require_same_dims(ma, mask, "breed template");
  Image child = pa;
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (mask[i] != 0.0) child[i] = ma[i];
  }
  return child;
}

Image breed(const Image& ma, const Image& pa, Rng& rng) {
  require_same_dims(ma, pa, "breed");
  Image child = pa;
  const std::size_t n = child.size();
  for (std::size_t base = 0; base < n; base += 64) {
    std::uint64_t bits = rng.next_u64();
    const std::size_t end = std::min(n, base + 64);
    for (std::size_t i = base; i < end; ++i, bits >>= 1) {
      if (bits & 1U) child[i] = ma[i];
    }
  }
  return child;
}

double mutation_rate(int generation, const GaConfig& config) {
  if (generation < 1) throw InvalidInput("generation index starts at 1");
  return (config.mutation_initial - config.mutation_final) *
             std::exp(-(generation - 1) / config.mutation_decay) +
         config.mutation_final;
}

Image mutate(const Image& pattern, double rate, PixelMode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidInput("mutation rate must lie in [0, 1]");
  Image out = pattern;
  if (rate == 0.0) return out;
  auto pixels = out.pixels();
  auto mutate_at = [&](std::size_t i) {
    pixels[i] = mode == PixelMode::binary ? 1.0 - pixels[i] : rng.uniform();
  };
  if (rate == 1.0) {
    for (std::size_t i = 0; i < pixels.size(); ++i) mutate_at(i);
    return out;
  }
  // Gaps between mutated pixels are geometric; one draw per mutation.
  const double log_keep = std::log1p(-rate);
  std::size_t i = 0;
  for (;;) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(pixels.size() - i)) break;
    i += static_cast<std::size_t>(gap);
    mutate_at(i);
    ++i;
    if (i >= pixels.size()) break;
  }
  return out;
}

void step_generation(GaState& state, const Image& object, const NoiseModel& noise,
                     const GaConfig& config, Rng& rng) {
  auto& pop = state.population;
  const auto m = static_cast<std::size_t>(config.offspring);
  if (pop.size() != static_cast<std::size_t>(config.population) || m >= pop.size()) {
    throw InvalidInput("state population does not match config");
  }
  require_same_dims(pop.front().pattern, object, "step_generation");

  const int g = state.generation + 1;
  const double rate = mutation_rate(state.generation_offset + g, config);
  const int order = weight_order(config);

  std::vector<PopulationMember> children(m);
  for (auto& child : children) {
    const auto [ma, pa] = select_parents(pop, rng);
    child.pattern = mutate(breed(pop[ma].pattern, pop[pa].pattern, rng), rate, config.mode, rng);
    child.birth_generation = g;
  }
  // Measurement is independent per child; kept after all breeding draws.
  for (auto& child : children) {
    child.signal = measure_bucket(child.pattern, object, noise, rng);
    child.weight = pattern_weight(child.pattern, order);
    child.cf = member_cost(child.signal, child.weight, state.baseline, config);
  }

  std::move(children.begin(), children.end(), pop.end() - static_cast<std::ptrdiff_t>(m));
  rank(pop);
  state.generation = g;
  state.frame_measurements += m;
  state.total_measurements += m;
}

GaState start_state(const GaConfig& config, const Image& object, const NoiseModel& noise,
                    Rng& rng) {
  auto [pop, baseline] = init_population(config, object, noise, rng);
  GaState state;
  state.population = std::move(pop);
  state.baseline = baseline;
  state.frame_measurements = state.population.size();
  state.total_measurements = state.population.size();
  return state;
}

GaState warm_start(GaState previous, const Image& next_frame) {
  if (previous.population.empty()) throw InvalidInput("warm start needs a population");
  require_same_dims(previous.population.front().pattern, next_frame, "warm_start");
  previous.generation_offset += previous.generation;
  previous.generation = 0;
  previous.frame_measurements = 0;
  for (auto& m : previous.population) m.birth_generation = 0;
  return previous;
}

void refresh_population(GaState& state, const Image& object, const NoiseModel& noise,
                        const GaConfig& config, Rng& rng) {
  for (auto& m : state.population) {
    m.signal = measure_bucket(m.pattern, object, noise, rng);
    m.cf = member_cost(m.signal, m.weight, state.baseline, config);
  }
  rank(state.population);
  state.frame_measurements += state.population.size();
  state.total_measurements += state.population.size();
}

EvolutionTrace evolve_from(GaState state, const GaConfig& config, const Image& object,
                           const NoiseModel& noise, Rng& rng, int snapshot_interval,
                           const GenerationObserver& observer) {
  config.validate();
  EvolutionTrace trace;
  trace.records.reserve(static_cast<std::size_t>(config.generations) + 1);

  auto record = [&] {
    GenerationRecord rec = summarize(state);
    if (observer) observer(state, rec);
    trace.records.push_back(rec);
  };

  record();
  for (int g = 1; g <= config.generations; ++g) {
    step_generation(state, object, noise, config, rng);
    record();
    if (snapshot_interval > 0 && g % snapshot_interval == 0) {
      trace.snapshots.emplace_back(g, result_image(state.population, config.result_rule));
    }
  }
  trace.result = result_image(state.population, config.result_rule);
  trace.final_state = std::move(state);
  return trace;
}

int continuation_generations(const GaConfig& config, WarmStartPolicy policy) {
  if (policy == WarmStartPolicy::stale) return config.generations;
  const int refresh_cost = (config.population + config.offspring - 1) / config.offspring;
  return std::max(0, config.generations - refresh_cost);
}

std::uint64_t continuation_measurements(const GaConfig& config, WarmStartPolicy policy) {
  const auto gens = static_cast<std::uint64_t>(continuation_generations(config, policy));
  const auto m = static_cast<std::uint64_t>(config.offspring);
  if (policy == WarmStartPolicy::stale) return gens * m;
  return static_cast<std::uint64_t>(config.population) + gens * m;
}

EvolutionTrace evolve_frame(GaState previous, const Image& frame, WarmStartPolicy policy,
                            const GaConfig& config, const NoiseModel& noise, Rng& rng,
                            int snapshot_interval, const GenerationObserver& observer) {
  GaState state = warm_start(std::move(previous), frame);
  if (policy == WarmStartPolicy::refresh) refresh_population(state, frame, noise, config, rng);
  GaConfig frame_config = config;
  frame_config.generations = continuation_generations(config, policy);
  return evolve_from(std::move(state), frame_config, frame, noise, rng, snapshot_interval, observer);
}

EvolutionTrace evolve(const GaConfig& config, const Image& object, const NoiseModel& noise,
                      Rng& rng, int snapshot_interval, const GenerationObserver& observer) {
  GaState state = start_state(config, object, noise, rng);
  return evolve_from(std::move(state), config, object, noise, rng, snapshot_interval, observer);
}

Image result_image(const Population& ranked, const ResultRule& rule) {
  if (ranked.empty()) throw InvalidInput("result image of an empty population");
  if (rule.kind == ResultRule::Kind::best_member) return ranked.front().pattern;
  const auto q = std::min<std::size_t>(static_cast<std::size_t>(rule.q), ranked.size());
  Image out(ranked.front().pattern.dims());
  for (std::size_t i = 0; i < q; ++i) {
    const auto src = ranked[i].pattern.pixels();
    auto dst = out.pixels();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p] += src[p];
  }
  for (double& v : out.pixels()) v /= static_cast<double>(q);
  return out;
}

}  // namespace segi
