#include "neuro/ga.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

namespace neuro {

void GAConfig::validate() const {
    if (population_size < 1) throw ConfigError("population size must be >= 1");
    if (elite_fraction <= 0.0 || elite_fraction > 1.0)
        throw ConfigError("elite fraction must lie in (0, 1]");
    if (static_cast<int>(std::floor(elite_fraction * population_size)) < 2)
        throw ConfigError("elite fraction times population size must floor to >= 2 "
                          "(crossover needs two parents)");
    if (mutation_sigma0 <= 0.0) throw ConfigError("mutation sigma0 must be positive");
    if (mutation_decay <= 0.0 || mutation_decay > 1.0)
        throw ConfigError("mutation decay must lie in (0, 1]");
    if (min_sigma <= 0.0) throw ConfigError("min sigma must be positive");
    if (episodes_per_eval < 1) throw ConfigError("episodes per eval must be >= 1");
    if (max_generations < 1) throw ConfigError("max generations must be >= 1");
}

Population generate_population(const GAConfig& config, const NetworkShape& shape,
                               Rng& rng) {
    config.validate();
    Population pop;
    pop.members.resize(config.population_size);
    for (Genome& g : pop.members) {
        g.resize(shape.parameter_count());
        for (double& w : g) w = rng.next_normal();
    }
    return pop;
}

std::vector<int> select_elite_indices(const Population& pop, const GAConfig& config) {
    if (!pop.fitness) throw StateError("population has no fitness scores");
    if (pop.fitness->size() != pop.members.size())
        throw StateError("fitness list length does not match the population");

    std::vector<int> order(pop.members.size());
    std::iota(order.begin(), order.end(), 0);
    const std::vector<double>& f = *pop.fitness;
    std::sort(order.begin(), order.end(), [&f](int a, int b) {
        if (f[a] != f[b]) return f[a] > f[b];
        return a < b;
    });
    int count = std::min<int>(config.elite_count(), static_cast<int>(order.size()));
    order.resize(count);
    return order;
}

std::vector<Genome> select_elite(const Population& pop, const GAConfig& config) {
    std::vector<Genome> elites;
    for (int i : select_elite_indices(pop, config)) elites.push_back(pop.members[i]);
    return elites;
}

Genome uniform_crossover(const Genome& parent_a, const Genome& parent_b, Rng& rng) {
    if (parent_a.size() != parent_b.size())
        throw ShapeError("crossover parents have different lengths");
    Genome child(parent_a.size());
    for (size_t i = 0; i < child.size(); ++i)
        child[i] = (rng.next_u64() & 1) ? parent_b[i] : parent_a[i];
    return child;
}

Genome mutate(const Genome& genome, double sigma, Rng& rng) {
    if (sigma <= 0.0) throw ConfigError("mutation sigma must be positive");
    Genome out(genome.size());
    for (size_t i = 0; i < genome.size(); ++i)
        out[i] = genome[i] + sigma * rng.next_normal();
    return out;
}

std::pair<int, int> sample_parent_pair(int pool_size, Rng& rng) {
    if (pool_size < 2) throw ConfigError("parent pool needs at least two members");
    int a = static_cast<int>(rng.next_below(pool_size));
    int b = static_cast<int>(rng.next_below(pool_size - 1));
    if (b >= a) ++b;
    return {a, b};
}

Population next_generation(const Population& pop, const GAConfig& config,
                           double sigma, Rng& rng) {
    config.validate();
    std::vector<int> elites = select_elite_indices(pop, config);
    if (elites.size() < 2) throw ConfigError("breeding needs at least two elites");

    Population next;
    next.generation_index = pop.generation_index + 1;
    next.members.reserve(pop.members.size());
    for (int e : elites) next.members.push_back(pop.members[e]);
    while (next.size() < pop.size()) {
        auto [i, j] = sample_parent_pair(static_cast<int>(elites.size()), rng);
        Genome child = uniform_crossover(pop.members[elites[i]], pop.members[elites[j]], rng);
        next.members.push_back(mutate(child, sigma, rng));
    }
    return next;
}

std::vector<double> evaluate_population(const Population& pop,
                                        const FitnessEvaluator& evaluator,
                                        uint64_t seed_base, int jobs) {
    const int n = pop.size();
    std::vector<double> scores(n);
    auto eval_one = [&](int i) {
        scores[i] = evaluator.score(pop.members[i], Rng(Rng::fold64(seed_base, i)));
    };
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) eval_one(i);
        return scores;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            eval_one(i);
        }
    };
    std::vector<std::thread> pool;
    int threads = std::min(jobs, n);
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return scores;
}

namespace detail {

RunResult run_loop(const GAConfig& config, const FitnessEvaluator& evaluator,
                   uint64_t seed, double solve_bar, Population initial,
                   GenerationTransition& transition, const RunOptions& opts) {
    config.validate();
    const int jobs = opts.jobs > 1 ? opts.jobs : 1;
    const double bar_score = solve_bar * evaluator.episodes_per_eval();

    RunResult result;
    result.seed = seed;
    Population pop = std::move(initial);

    for (int gen = 0; gen < config.max_generations; ++gen) {
        const uint64_t episodes_before = evaluator.episodes_consumed();
        pop.fitness = evaluate_population(
            pop, evaluator, Rng::derive(seed, {streams::kEval, static_cast<uint64_t>(gen)}),
            jobs);

        const std::vector<double>& f = *pop.fitness;
        int top_i = 0;
        double total = 0.0;
        for (int i = 0; i < pop.size(); ++i) {
            total += f[i];
            if (f[i] > f[top_i]) top_i = i;
        }

        // A top score past the bar triggers a fresh re-evaluation so a lucky
        // evaluation cannot stop the run on its own.
        bool solved = false;
        if (f[top_i] >= bar_score) {
            Rng check(Rng::derive(seed, {streams::kSolve, static_cast<uint64_t>(gen)}));
            solved = evaluator.score(pop.members[top_i], check) >= bar_score;
        }

        GenerationLog log;
        log.generation = gen;
        log.top_score = f[top_i];
        log.mean_score = total / pop.size();
        log.sigma = config.sigma_at(gen);

        const bool last = solved || gen + 1 == config.max_generations;
        Population next;
        if (!last)
            next = transition.advance(pop, config, log.sigma, seed, gen, jobs, log.branch);

        log.env_episodes_used = evaluator.episodes_consumed() - episodes_before;
        result.logs.push_back(log);
        if (opts.observer) opts.observer(pop, log);

        if (last) {
            result.champion = pop.members[top_i];
            if (solved) {
                result.solved = true;
                result.solve_generation = gen;
            }
            break;
        }
        pop = std::move(next);
    }
    return result;
}

} // namespace detail

namespace {

struct BaselineTransition : detail::GenerationTransition {
    Population advance(const Population& pop, const GAConfig& config, double sigma,
                       uint64_t run_seed, int generation, int /*jobs*/,
                       std::optional<Branch>& /*branch*/) override {
        Rng breed(Rng::derive(run_seed, {streams::kBreed, static_cast<uint64_t>(generation)}));
        return next_generation(pop, config, sigma, breed);
    }
};

} // namespace

RunResult run_baseline(const GAConfig& config, const LakeEvaluator& evaluator,
                       uint64_t seed, const RunOptions& opts) {
    config.validate();
    Rng init(Rng::derive(seed, {streams::kInit}));
    Population pop = generate_population(config, evaluator.shape(), init);
    BaselineTransition transition;
    return detail::run_loop(config, evaluator, seed, evaluator.env().solve_bar,
                            std::move(pop), transition, opts);
}

} // namespace neuro
