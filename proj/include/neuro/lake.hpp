#ifndef NEURO_LAKE_HPP
#define NEURO_LAKE_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "neuro/errors.hpp"
#include "neuro/net.hpp"
#include "neuro/rng.hpp"

namespace neuro {

enum class Cell : uint8_t { Start, Frozen, Hole, Goal };

// Actions use the canonical encoding; a slip executes one of the two
// perpendicular directions instead of the intended one.
enum Action : int { kLeft = 0, kDown = 1, kRight = 2, kUp = 3 };

// A 4x4 (or other rectangular) gridworld read from rows of S/F/H/G text.
class LakeMap {
public:
    // The canonical 4x4 layout: holes at 5, 7, 11, 12; goal at 15.
    static LakeMap default_4x4();

    // Rows of equal length over {S, F, H, G}; exactly one S and one G.
    static LakeMap from_text(const std::vector<std::string>& rows);
    static LakeMap load(const std::string& path);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int cell_count() const { return rows_ * cols_; }
    int start() const { return start_; }
    int goal() const { return goal_; }
    Cell cell(int pos) const { return grid_[pos]; }
    bool is_terminal(int pos) const {
        return grid_[pos] == Cell::Hole || grid_[pos] == Cell::Goal;
    }
    std::vector<std::string> to_text() const;

private:
    LakeMap() = default;
    int rows_ = 0, cols_ = 0;
    int start_ = -1, goal_ = -1;
    std::vector<Cell> grid_;
};

struct EnvState {
    int position = 0;
    int steps_taken = 0;
    bool done = false;
};

struct StepResult {
    int next_position = 0;
    double reward = 0.0;
    bool terminal = false;
};

struct EnvConfig {
    int step_cap = 100;
    bool slippery = true;
    // The canonical environment slips on every non-terminal cell, the start
    // cell included; set false to exempt the start cell.
    bool slippery_start = true;
    double solve_bar = 0.78; // mean per-episode reward that counts as solved
};

// Deterministic movement: where `pos` ends up when direction `dir` executes.
// Walking off the grid leaves the position unchanged.
StepResult apply_move(const LakeMap& map, int pos, int dir);

// One environment transition. The executed direction is the intended one or
// either perpendicular, each with probability 1/3 (the reverse never
// executes). Throws StateError if the episode is already done.
StepResult step(const LakeMap& map, const EnvState& state, int action,
                const EnvConfig& env, Rng& rng);

// Roll out one episode from the start cell under the genome's greedy policy.
// Returns the summed reward (0 or 1 on maps with a single goal reward).
double run_episode(const Genome& genome, const NetworkShape& shape,
                   const LakeMap& map, const EnvConfig& env, Rng& rng,
                   NetWorkspace* ws = nullptr,
                   Activation act = Activation::ReLU);

// Accumulated reward over `episodes` independent episodes whose sub-seeds
// are drawn from rng. Score lies in [0, episodes].
double evaluate_fitness(const Genome& genome, const NetworkShape& shape,
                        const LakeMap& map, const EnvConfig& env,
                        int episodes, Rng& rng,
                        Activation act = Activation::ReLU);

// Fitness backend used by the run loops: scores one genome per call and
// counts every episode it plays so harnesses can audit environment usage.
class FitnessEvaluator {
public:
    virtual ~FitnessEvaluator() = default;
    virtual double score(const Genome& genome, Rng rng) const = 0;
    virtual int episodes_per_eval() const = 0;
    uint64_t episodes_consumed() const { return episodes_.load(); }

protected:
    void count_episodes(uint64_t n) const { episodes_.fetch_add(n); }

private:
    mutable std::atomic<uint64_t> episodes_{0};
};

class LakeEvaluator : public FitnessEvaluator {
public:
    LakeEvaluator(LakeMap map, NetworkShape shape, EnvConfig env, int episodes,
                  Activation act = Activation::ReLU)
        : map_(std::move(map)), shape_(std::move(shape)), env_(env),
          episodes_per_eval_(episodes), activation_(act) {
        if (episodes_per_eval_ < 1) throw ConfigError("episodes per eval must be >= 1");
    }

    double score(const Genome& genome, Rng rng) const override;
    int episodes_per_eval() const override { return episodes_per_eval_; }

    const LakeMap& map() const { return map_; }
    const NetworkShape& shape() const { return shape_; }
    const EnvConfig& env() const { return env_; }
    Activation activation() const { return activation_; }

private:
    LakeMap map_;
    NetworkShape shape_;
    EnvConfig env_;
    int episodes_per_eval_;
    Activation activation_;
};

} // namespace neuro

#endif
