#ifndef NEURO_GA_HPP
#define NEURO_GA_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "neuro/errors.hpp"
#include "neuro/lake.hpp"
#include "neuro/log.hpp"
#include "neuro/net.hpp"
#include "neuro/rng.hpp"

namespace neuro {

struct GAConfig {
    int population_size = 50;
    double elite_fraction = 0.10;
    double mutation_sigma0 = 0.5;
    double mutation_decay = 0.999; // multiplicative, per generation
    double min_sigma = 0.01;
    int episodes_per_eval = 100;
    int max_generations = 500;

    int elite_count() const {
        return static_cast<int>(std::ceil(elite_fraction * population_size));
    }

    void validate() const;

    double sigma_at(int generation) const {
        double s = mutation_sigma0 * std::pow(mutation_decay, generation);
        return s > min_sigma ? s : min_sigma;
    }
};

struct Population {
    std::vector<Genome> members;
    std::optional<std::vector<double>> fitness;
    int generation_index = 0;

    int size() const { return static_cast<int>(members.size()); }
};

// population_size genomes with weights i.i.d. Normal(0, 1).
Population generate_population(const GAConfig& config, const NetworkShape& shape,
                               Rng& rng);

// Indices of the ceil(elite_fraction * population_size) fittest members,
// descending fitness, ties broken by lower member index.
std::vector<int> select_elite_indices(const Population& pop, const GAConfig& config);

std::vector<Genome> select_elite(const Population& pop, const GAConfig& config);

// Each gene copied from either parent with probability 1/2.
Genome uniform_crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng);

// genome + Normal(0, sigma^2) noise per gene; the input is not modified.
Genome mutate(const Genome& genome, double sigma, Rng& rng);

// Draw two distinct indices uniformly from [0, pool_size).
std::pair<int, int> sample_parent_pair(int pool_size, Rng& rng);

// Elites carried over verbatim (slots 0..E-1, fitness-descending), the rest
// bred as mutate(uniform_crossover(two distinct elites)).
Population next_generation(const Population& pop, const GAConfig& config,
                           double sigma, Rng& rng);

// Evaluate every member with its own rng derived from
// fold64(seed_base, member index); safe to run on `jobs` threads with
// results identical to the serial order.
std::vector<double> evaluate_population(const Population& pop,
                                        const FitnessEvaluator& evaluator,
                                        uint64_t seed_base, int jobs = 1);

// Per-generation observer used by tests and progress reporting.
using GenerationObserver =
    std::function<void(const Population&, const GenerationLog&)>;

struct RunOptions {
    int jobs = 1;
    GenerationObserver observer;
};

// The baseline loop: evaluate, verify solve, breed, decay sigma. Stops at
// max_generations or at a verified solve (top performer scoring at least
// solve_bar per episode on a fresh evaluation).
RunResult run_baseline(const GAConfig& config, const LakeEvaluator& evaluator,
                       uint64_t seed, const RunOptions& opts = {});

// Shared harness internals, reused by the MSM and directed-crossover loops.
namespace detail {

struct GenerationTransition {
    // Breed the next population. `episodes_before` lets the loop attribute
    // speculative evaluations to the current generation's log.
    virtual Population advance(const Population& pop, const GAConfig& config,
                               double sigma, uint64_t run_seed, int generation,
                               int jobs, std::optional<Branch>& branch) = 0;
    virtual ~GenerationTransition() = default;
};

RunResult run_loop(const GAConfig& config, const FitnessEvaluator& evaluator,
                   uint64_t seed, double solve_bar, Population initial,
                   GenerationTransition& transition, const RunOptions& opts);

} // namespace detail

} // namespace neuro

#endif
