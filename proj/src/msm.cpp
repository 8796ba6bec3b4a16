#include "neuro/msm.hpp"

#include <algorithm>
#include <cmath>

namespace neuro {

Population multi_step_mutate(const std::vector<Genome>& elites, int n,
                             const GAConfig& config, double sigma, Rng& rng) {
    if (n < 1) throw ConfigError("MSM extra steps must be >= 1");
    if (elites.size() < 2) throw ConfigError("MSM needs at least two elites");

    std::vector<Genome> current = elites;
    for (int round = 0; round < n; ++round) {
        std::vector<Genome> bred;
        bred.reserve(config.population_size);
        const int pool = static_cast<int>(current.size());
        for (int c = 0; c < config.population_size; ++c) {
            auto [i, j] = sample_parent_pair(pool, rng);
            bred.push_back(mutate(uniform_crossover(current[i], current[j], rng), sigma, rng));
        }
        current = std::move(bred);
    }

    Population out;
    out.members = std::move(current);
    return out;
}

double distance_fitness(const Genome& candidate, const Population& reference_pop,
                        DistanceAggregate aggregate) {
    if (reference_pop.members.empty())
        throw InputError("distance fitness needs a non-empty reference population");

    double sum = 0.0;
    double min_d = std::numeric_limits<double>::infinity();
    for (const Genome& ref : reference_pop.members) {
        if (ref.size() != candidate.size())
            throw ShapeError("distance fitness genome lengths differ");
        double sq = 0.0;
        for (size_t i = 0; i < ref.size(); ++i) {
            double d = candidate[i] - ref[i];
            sq += d * d;
        }
        double dist = std::sqrt(sq);
        sum += dist;
        min_d = std::min(min_d, dist);
    }
    return aggregate == DistanceAggregate::MeanToAll
               ? sum / static_cast<double>(reference_pop.members.size())
               : min_d;
}

double aggregate_fitness(const std::vector<double>& fitness, FitnessAggregate how) {
    if (fitness.empty()) throw InputError("cannot aggregate an empty fitness list");
    if (how == FitnessAggregate::Max)
        return *std::max_element(fitness.begin(), fitness.end());
    double total = 0.0;
    for (double f : fitness) total += f;
    return total / static_cast<double>(fitness.size());
}

MSMGenerationResult msm_generation(const Population& pop, const GAConfig& config,
                                   const MSMConfig& msm, double sigma,
                                   const FitnessEvaluator& evaluator,
                                   uint64_t mutated_eval_seed, Rng& breed_rng,
                                   int jobs) {
    config.validate();
    msm.validate();
    if (!pop.fitness) throw StateError("MSM generation needs fitness on the input population");

    std::vector<Genome> elites = select_elite(pop, config);

    MSMGenerationResult result;
    result.mutated = multi_step_mutate(elites, msm.extra_steps, config, sigma, breed_rng);
    result.mutated.generation_index = pop.generation_index;

    std::vector<double> f_mutated =
        evaluate_population(result.mutated, evaluator, mutated_eval_seed, jobs);

    const double current_level = aggregate_fitness(*pop.fitness, msm.comparison);
    const double mutated_level = aggregate_fitness(f_mutated, msm.comparison);

    if (mutated_level >= current_level) {
        result.branch = Branch::Accepted;
        result.population = result.mutated;
        result.population.fitness = std::move(f_mutated);
        result.population.generation_index = pop.generation_index + 1;
        return result;
    }

    // Reject: breed from the environment elites, then use distance from the
    // rejected population as the fitness that picks the parents of the
    // returned generation. No environment evaluations happen on this path.
    result.branch = Branch::Rejected;
    result.mutated.fitness = std::move(f_mutated);

    Population fresh = next_generation(pop, config, sigma, breed_rng);
    std::vector<double> distance(fresh.members.size());
    for (size_t i = 0; i < fresh.members.size(); ++i)
        distance[i] = distance_fitness(fresh.members[i], result.mutated,
                                       msm.distance_aggregate);
    fresh.fitness = std::move(distance);

    result.population = next_generation(fresh, config, sigma, breed_rng);
    result.population.generation_index = pop.generation_index + 1;
    return result;
}

namespace {

struct MSMTransition : detail::GenerationTransition {
    const MSMConfig& msm;
    const FitnessEvaluator& evaluator;

    MSMTransition(const MSMConfig& m, const FitnessEvaluator& e)
        : msm(m), evaluator(e) {}

    Population advance(const Population& pop, const GAConfig& config, double sigma,
                       uint64_t run_seed, int generation, int jobs,
                       std::optional<Branch>& branch) override {
        Rng breed(Rng::derive(run_seed, {streams::kBreed, static_cast<uint64_t>(generation)}));
        uint64_t eval_seed =
            Rng::derive(run_seed, {streams::kMsmEval, static_cast<uint64_t>(generation)});
        MSMGenerationResult r =
            msm_generation(pop, config, msm, sigma, evaluator, eval_seed, breed, jobs);
        branch = r.branch;
        return std::move(r.population);
    }
};

} // namespace

RunResult run_msm(const GAConfig& config, const MSMConfig& msm,
                  const LakeEvaluator& evaluator, uint64_t seed,
                  const RunOptions& opts) {
    config.validate();
    msm.validate();
    Rng init(Rng::derive(seed, {streams::kInit}));
    Population pop = generate_population(config, evaluator.shape(), init);
    MSMTransition transition(msm, evaluator);
    return detail::run_loop(config, evaluator, seed, evaluator.env().solve_bar,
                            std::move(pop), transition, opts);
}

} // namespace neuro
