#ifndef NEURO_SPARSE_HPP
#define NEURO_SPARSE_HPP

#include <cstdint>
#include <optional>

#include "neuro/ga.hpp"

namespace neuro {

// Active-connection marker for a genome. `density` records the realized
// fraction of set bits, not the sampling parameter.
struct SparsityMask {
    std::vector<uint8_t> bits; // one byte per connection, 0 or 1
    double density = 0.0;

    int popcount() const {
        int n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }
};

// A genome whose weights are zero wherever the mask is clear.
struct SparseGenome {
    Genome weights;
    SparsityMask mask;

    static SparseGenome from_weights(Genome weights);
    int nonzero_count() const { return mask.popcount(); }
    void check_consistent() const; // throws ShapeError on a violated mask
};

struct DirectedConfig {
    double zeta = 0.3;    // fraction of each parent's active weights pruned
    double density = 0.5; // Erdos-Renyi keep probability at initialization
    // Stddev of regrown connections; unset means "track the current
    // mutation sigma", which the run loop resolves each generation.
    std::optional<double> regrow_sigma;
    // Ablation switch: mutate all positions instead of active ones only.
    bool dense_mutation = false;

    void validate() const;
    void validate_for(const NetworkShape& shape) const;
};

// Keep each connection independently with probability `density`.
SparsityMask generate_sparsity_mask(const NetworkShape& shape, double density,
                                    Rng& rng);

// Zero every weight the mask excludes.
Genome apply_mask(const Genome& genome, const SparsityMask& mask);

// The sparse crossover: prune the floor(zeta * nnz) smallest-magnitude
// active weights of each parent (ties to the lower index), keep the
// larger-magnitude parent value per remaining position, then restore the
// child to the rounded mean of the parents' pre-prune budgets — regrowing
// random Gaussian connections when short, trimming the smallest-magnitude
// weights when the merged support overshoots.
SparseGenome directed_crossover(const SparseGenome& parent_a,
                                const SparseGenome& parent_b,
                                const DirectedConfig& cfg, Rng& rng);

// Gaussian noise on active connections only; the mask is preserved.
SparseGenome mutate_sparse(const SparseGenome& genome, double sigma, Rng& rng);

// Baseline loop with Erdos-Renyi-masked initialization, directed_crossover
// breeding, and mask-respecting mutation.
RunResult run_directed(const GAConfig& config, const DirectedConfig& dcfg,
                       const LakeEvaluator& evaluator, uint64_t seed,
                       const RunOptions& opts = {});

} // namespace neuro

#endif
