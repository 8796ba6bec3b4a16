#ifndef NEURO_RNG_HPP
#define NEURO_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace neuro {

// Reproducible random source used everywhere in the toolkit.
//
// Algorithm: SplitMix64 (Steele, Lea & Flood; Vigna's reference constants).
// It is a counter-based generator: the state advances by a fixed odd
// constant and each output is an avalanche hash of the state, so
// output[i] = mix64(seed + (i+1) * 0x9e3779b97f4a7c15). The integer stream
// is bit-exact on any platform; test vectors live in tests/test_rng.cpp
// and in the README.
//
// Stream separation: child seeds are derived by hashing path components
// onto a parent seed with fold64(). The experiment harness derives every
// stream from (master_seed, run, stream tag, generation, member, ...) so
// evaluations can run on any number of threads without changing results.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    // mix64 is the SplitMix64 finalizer; a bijection on 64-bit values.
    static uint64_t mix64(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Derive a child seed from a parent seed and one path component.
    static uint64_t fold64(uint64_t seed, uint64_t component) {
        return mix64(seed ^ mix64(component + kGamma));
    }

    // Fold a whole path, left to right.
    static uint64_t derive(uint64_t seed, std::initializer_list<uint64_t> path) {
        for (uint64_t c : path) seed = fold64(seed, c);
        return seed;
    }

    uint64_t next_u64() {
        state_ += kGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). bound must be nonzero. Modulo bias is
    // below 2^-32 for every bound used here.
    uint64_t next_below(uint64_t bound) {
        return next_u64() % bound;
    }

    // Standard normal via the cosine branch of Box-Muller. One draw per
    // call keeps the stream layout independent of call parity.
    double next_normal();

    double next_normal(double mean, double sigma) {
        return mean + sigma * next_normal();
    }

private:
    static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    uint64_t state_;
};

// Stream tags for deriving independent substreams from a run seed.
// Layout: run_seed = fold64(master_seed, run index), then
// derive(run_seed, {tag, generation, member, ...}) as each tag requires.
namespace streams {
inline constexpr uint64_t kInit = 1;      // initial population weights
inline constexpr uint64_t kMask = 2;      // sparsity masks
inline constexpr uint64_t kEval = 3;      // fitness evaluation, per (generation, member)
inline constexpr uint64_t kBreed = 4;     // selection/crossover/mutation, per generation
inline constexpr uint64_t kSolve = 5;     // fresh solve-check evaluations, per generation
inline constexpr uint64_t kMsmEval = 6;   // evaluation of the speculative MSM population
inline constexpr uint64_t kRun = 7;       // master_seed -> run seed
inline constexpr uint64_t kCliEval = 8;   // re-evaluation of archived champions
} // namespace streams

} // namespace neuro

#endif
