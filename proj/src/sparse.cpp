#include "neuro/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace neuro {

SparseGenome SparseGenome::from_weights(Genome weights) {
    SparseGenome g;
    g.mask.bits.resize(weights.size());
    int nnz = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        g.mask.bits[i] = weights[i] != 0.0 ? 1 : 0;
        nnz += g.mask.bits[i];
    }
    g.mask.density = weights.empty() ? 0.0 : static_cast<double>(nnz) / weights.size();
    g.weights = std::move(weights);
    return g;
}

void SparseGenome::check_consistent() const {
    if (weights.size() != mask.bits.size())
        throw ShapeError("sparse genome mask length does not match the weights");
    for (size_t i = 0; i < weights.size(); ++i)
        if (!mask.bits[i] && weights[i] != 0.0)
            throw ShapeError("sparse genome carries weight outside its mask");
}

void DirectedConfig::validate() const {
    if (zeta <= 0.0 || zeta >= 1.0)
        throw ConfigError("zeta must lie in (0, 1)");
    if (density <= 0.0 || density > 1.0)
        throw ConfigError("mask density must lie in (0, 1]");
    if (regrow_sigma && *regrow_sigma <= 0.0)
        throw ConfigError("regrow sigma must be positive");
}

void DirectedConfig::validate_for(const NetworkShape& shape) const {
    validate();
    if (zeta * density * shape.parameter_count() < 1.0)
        throw ConfigError("zeta times the expected nonzero count must be >= 1");
}

SparsityMask generate_sparsity_mask(const NetworkShape& shape, double density,
                                    Rng& rng) {
    if (density <= 0.0 || density > 1.0)
        throw ConfigError("mask density must lie in (0, 1]");
    SparsityMask mask;
    mask.bits.resize(shape.parameter_count());
    int kept = 0;
    for (uint8_t& b : mask.bits) {
        b = rng.next_double() < density ? 1 : 0;
        kept += b;
    }
    mask.density = mask.bits.empty() ? 0.0
                                     : static_cast<double>(kept) / mask.bits.size();
    return mask;
}

Genome apply_mask(const Genome& genome, const SparsityMask& mask) {
    if (genome.size() != mask.bits.size())
        throw ShapeError("mask length does not match the genome");
    Genome out = genome;
    for (size_t i = 0; i < out.size(); ++i)
        if (!mask.bits[i]) out[i] = 0.0;
    return out;
}

namespace {

std::vector<int> active_indices(const SparseGenome& g) {
    std::vector<int> idx;
    idx.reserve(g.weights.size());
    for (size_t i = 0; i < g.weights.size(); ++i)
        if (g.mask.bits[i]) idx.push_back(static_cast<int>(i));
    return idx;
}

// Zero the `count` active weights of smallest magnitude, lower index first
// on ties. Operates in place.
void prune_smallest(SparseGenome& g, int count) {
    if (count <= 0) return;
    std::vector<int> idx = active_indices(g);
    std::sort(idx.begin(), idx.end(), [&g](int a, int b) {
        double ma = std::fabs(g.weights[a]);
        double mb = std::fabs(g.weights[b]);
        if (ma != mb) return ma < mb;
        return a < b;
    });
    count = std::min<int>(count, static_cast<int>(idx.size()));
    for (int k = 0; k < count; ++k) {
        g.weights[idx[k]] = 0.0;
        g.mask.bits[idx[k]] = 0;
    }
}

} // namespace

SparseGenome directed_crossover(const SparseGenome& parent_a,
                                const SparseGenome& parent_b,
                                const DirectedConfig& cfg, Rng& rng) {
    cfg.validate();
    if (parent_a.weights.size() != parent_b.weights.size())
        throw ShapeError("directed crossover parents have different lengths");
    if (!cfg.regrow_sigma)
        throw ConfigError("directed crossover needs a resolved regrow sigma");

    const int nnz_a = parent_a.nonzero_count();
    const int nnz_b = parent_b.nonzero_count();
    const int target = static_cast<int>(std::llround((nnz_a + nnz_b) / 2.0));

    SparseGenome pruned_a = parent_a;
    SparseGenome pruned_b = parent_b;
    prune_smallest(pruned_a, static_cast<int>(std::floor(cfg.zeta * nnz_a)));
    prune_smallest(pruned_b, static_cast<int>(std::floor(cfg.zeta * nnz_b)));

    // Keep the larger-magnitude parent value per position; a parent inactive
    // at the position contributes zero.
    const size_t n = parent_a.weights.size();
    SparseGenome child;
    child.weights.assign(n, 0.0);
    child.mask.bits.assign(n, 0);
    int child_nnz = 0;
    for (size_t i = 0; i < n; ++i) {
        double wa = pruned_a.weights[i];
        double wb = pruned_b.weights[i];
        double w = std::fabs(wa) >= std::fabs(wb) ? wa : wb;
        if (w != 0.0) {
            child.weights[i] = w;
            child.mask.bits[i] = 1;
            ++child_nnz;
        }
    }

    if (child_nnz > target) {
        // Merging two lightly overlapping supports can overshoot the budget;
        // drop the smallest-magnitude survivors back down to it.
        prune_smallest(child, child_nnz - target);
        child_nnz = target;
    } else if (child_nnz < target) {
        std::vector<int> inactive;
        inactive.reserve(n - child_nnz);
        for (size_t i = 0; i < n; ++i)
            if (!child.mask.bits[i]) inactive.push_back(static_cast<int>(i));
        // Draw without replacement: move each picked index out of the pool.
        int need = target - child_nnz;
        for (int k = 0; k < need && !inactive.empty(); ++k) {
            size_t pick = rng.next_below(inactive.size());
            int pos = inactive[pick];
            inactive[pick] = inactive.back();
            inactive.pop_back();
            child.mask.bits[pos] = 1;
            child.weights[pos] = rng.next_normal(0.0, *cfg.regrow_sigma);
        }
        child_nnz = target;
    }

    child.mask.density = n == 0 ? 0.0 : static_cast<double>(child_nnz) / n;
    return child;
}

SparseGenome mutate_sparse(const SparseGenome& genome, double sigma, Rng& rng) {
    if (sigma <= 0.0) throw ConfigError("mutation sigma must be positive");
    SparseGenome out = genome;
    for (size_t i = 0; i < out.weights.size(); ++i)
        if (out.mask.bits[i]) out.weights[i] += sigma * rng.next_normal();
    return out;
}

namespace {

struct DirectedTransition : detail::GenerationTransition {
    const DirectedConfig& dcfg;

    explicit DirectedTransition(const DirectedConfig& d) : dcfg(d) {}

    Population advance(const Population& pop, const GAConfig& config, double sigma,
                       uint64_t run_seed, int generation, int /*jobs*/,
                       std::optional<Branch>& /*branch*/) override {
        Rng breed(Rng::derive(run_seed, {streams::kBreed, static_cast<uint64_t>(generation)}));

        DirectedConfig resolved = dcfg;
        if (!resolved.regrow_sigma) resolved.regrow_sigma = sigma;

        std::vector<int> elites = select_elite_indices(pop, config);
        Population next;
        next.generation_index = pop.generation_index + 1;
        next.members.reserve(pop.members.size());
        for (int e : elites) next.members.push_back(pop.members[e]);
        while (next.size() < pop.size()) {
            auto [i, j] = sample_parent_pair(static_cast<int>(elites.size()), breed);
            SparseGenome child = directed_crossover(
                SparseGenome::from_weights(pop.members[elites[i]]),
                SparseGenome::from_weights(pop.members[elites[j]]), resolved, breed);
            if (dcfg.dense_mutation) {
                next.members.push_back(mutate(child.weights, sigma, breed));
            } else {
                next.members.push_back(mutate_sparse(child, sigma, breed).weights);
            }
        }
        return next;
    }
};

} // namespace

RunResult run_directed(const GAConfig& config, const DirectedConfig& dcfg,
                       const LakeEvaluator& evaluator, uint64_t seed,
                       const RunOptions& opts) {
    config.validate();
    dcfg.validate_for(evaluator.shape());

    Rng init(Rng::derive(seed, {streams::kInit}));
    Population pop = generate_population(config, evaluator.shape(), init);
    Rng mask_rng(Rng::derive(seed, {streams::kMask}));
    for (Genome& g : pop.members) {
        SparsityMask mask = generate_sparsity_mask(evaluator.shape(), dcfg.density, mask_rng);
        g = apply_mask(g, mask);
    }

    DirectedTransition transition(dcfg);
    RunResult result = detail::run_loop(config, evaluator, seed,
                                        evaluator.env().solve_bar, std::move(pop),
                                        transition, opts);
    result.sparse_champion = true;
    return result;
}

} // namespace neuro
