#ifndef NEURO_MSM_HPP
#define NEURO_MSM_HPP

#include "neuro/ga.hpp"

namespace neuro {

enum class FitnessAggregate { Mean, Max };
enum class DistanceAggregate { MeanToAll, MinToAny };

struct MSMConfig {
    int extra_steps = 10; // n: crossover+mutation rounds applied to the elites
    FitnessAggregate comparison = FitnessAggregate::Mean;
    DistanceAggregate distance_aggregate = DistanceAggregate::MeanToAll;

    void validate() const {
        if (extra_steps < 1) throw ConfigError("MSM extra steps must be >= 1");
    }
};

// n rounds of mutate(uniform_crossover(.)) starting from the elite set. The
// first round expands to population_size children bred from elite pairs; no
// fitness exists mid-loop, so later rounds draw parent pairs uniformly from
// the whole current population.
Population multi_step_mutate(const std::vector<Genome>& elites, int n,
                             const GAConfig& config, double sigma, Rng& rng);

// Euclidean distance in flat weight space from candidate to the reference
// population, aggregated as the mean distance to all members (default) or
// the minimum distance to any member. Higher means farther from reference.
double distance_fitness(const Genome& candidate, const Population& reference_pop,
                        DistanceAggregate aggregate = DistanceAggregate::MeanToAll);

double aggregate_fitness(const std::vector<double>& fitness, FitnessAggregate how);

struct MSMGenerationResult {
    Population population;  // what the next generation starts from
    Branch branch = Branch::Accepted;
    Population mutated;     // the speculative n-step population (diagnostics)
};

// One MSM generation (the input population must carry fitness):
//   p_mutated <- multi_step_mutate(elites, n), evaluated in the environment.
//   Accept it verbatim when aggregate(f_mutated) >= aggregate(f_current);
//   otherwise breed a fresh population from the elites, score it purely by
//   distance from p_mutated, and breed the returned population from the
//   distance-elites (carried over unchanged).
MSMGenerationResult msm_generation(const Population& pop, const GAConfig& config,
                                   const MSMConfig& msm, double sigma,
                                   const FitnessEvaluator& evaluator,
                                   uint64_t mutated_eval_seed, Rng& breed_rng,
                                   int jobs = 1);

// Baseline loop with msm_generation as the transition; the per-generation
// log records which branch fired.
RunResult run_msm(const GAConfig& config, const MSMConfig& msm,
                  const LakeEvaluator& evaluator, uint64_t seed,
                  const RunOptions& opts = {});

} // namespace neuro

#endif
