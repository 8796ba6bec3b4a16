#include "neuro/lake.hpp"

#include <fstream>
#include <optional>

namespace neuro {

LakeMap LakeMap::default_4x4() {
    return from_text({"SFFF", "FHFH", "FFFH", "HFFG"});
}

LakeMap LakeMap::from_text(const std::vector<std::string>& rows) {
    if (rows.empty()) throw InputError("map has no rows");
    LakeMap m;
    m.rows_ = static_cast<int>(rows.size());
    m.cols_ = static_cast<int>(rows[0].size());
    if (m.cols_ == 0) throw InputError("map has empty rows");
    for (const std::string& row : rows) {
        if (static_cast<int>(row.size()) != m.cols_)
            throw InputError("map rows have unequal lengths");
        for (char c : row) {
            int pos = static_cast<int>(m.grid_.size());
            switch (c) {
                case 'S':
                    if (m.start_ >= 0) throw InputError("map has more than one start cell");
                    m.start_ = pos;
                    m.grid_.push_back(Cell::Start);
                    break;
                case 'F': m.grid_.push_back(Cell::Frozen); break;
                case 'H': m.grid_.push_back(Cell::Hole); break;
                case 'G':
                    if (m.goal_ >= 0) throw InputError("map has more than one goal cell");
                    m.goal_ = pos;
                    m.grid_.push_back(Cell::Goal);
                    break;
                default:
                    throw InputError(std::string("bad map character '") + c + "'");
            }
        }
    }
    if (m.start_ < 0) throw InputError("map has no start cell");
    if (m.goal_ < 0) throw InputError("map has no goal cell");
    return m;
}

LakeMap LakeMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map file: " + path);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (!line.empty()) rows.push_back(line);
    }
    return from_text(rows);
}

std::vector<std::string> LakeMap::to_text() const {
    std::vector<std::string> rows(rows_);
    for (int r = 0; r < rows_; ++r) {
        std::string& row = rows[r];
        row.resize(cols_);
        for (int c = 0; c < cols_; ++c) {
            switch (grid_[r * cols_ + c]) {
                case Cell::Start: row[c] = 'S'; break;
                case Cell::Frozen: row[c] = 'F'; break;
                case Cell::Hole: row[c] = 'H'; break;
                case Cell::Goal: row[c] = 'G'; break;
            }
        }
    }
    return rows;
}

StepResult apply_move(const LakeMap& map, int pos, int dir) {
    int r = pos / map.cols();
    int c = pos % map.cols();
    switch (dir) {
        case kLeft: c = c > 0 ? c - 1 : 0; break;
        case kDown: r = r < map.rows() - 1 ? r + 1 : r; break;
        case kRight: c = c < map.cols() - 1 ? c + 1 : c; break;
        case kUp: r = r > 0 ? r - 1 : 0; break;
        default: throw InputError("action must be in {0,1,2,3}");
    }
    StepResult out;
    out.next_position = r * map.cols() + c;
    out.reward = map.cell(out.next_position) == Cell::Goal ? 1.0 : 0.0;
    out.terminal = map.is_terminal(out.next_position);
    return out;
}

StepResult step(const LakeMap& map, const EnvState& state, int action,
                const EnvConfig& env, Rng& rng) {
    if (state.done) throw StateError("step() called on a finished episode");
    if (action < 0 || action > 3) throw InputError("action must be in {0,1,2,3}");

    int executed = action;
    bool slips = env.slippery &&
                 (env.slippery_start || map.cell(state.position) != Cell::Start);
    if (slips) {
        // offset -1, 0, +1 maps to {one perpendicular, intended, the other}.
        int offset = static_cast<int>(rng.next_below(3)) - 1;
        executed = (action + offset + 4) % 4;
    }
    return apply_move(map, state.position, executed);
}

double run_episode(const Genome& genome, const NetworkShape& shape,
                   const LakeMap& map, const EnvConfig& env, Rng& rng,
                   NetWorkspace* ws, Activation act) {
    if (env.step_cap < 1) throw ConfigError("step cap must be >= 1");
    if (shape.input_size() < map.cell_count())
        throw ShapeError("network input smaller than the map cell count");

    std::optional<NetWorkspace> local;
    if (!ws) {
        local.emplace(shape);
        ws = &*local;
    }
    NetWorkspace& scratch = *ws;

    EnvState state;
    state.position = map.start();
    double total = 0.0;
    while (!state.done) {
        int action = select_action(genome, shape, state.position, scratch, act);
        StepResult r = step(map, state, action, env, rng);
        total += r.reward;
        state.position = r.next_position;
        state.steps_taken += 1;
        state.done = r.terminal || state.steps_taken >= env.step_cap;
    }
    return total;
}

double evaluate_fitness(const Genome& genome, const NetworkShape& shape,
                        const LakeMap& map, const EnvConfig& env,
                        int episodes, Rng& rng, Activation act) {
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    NetWorkspace ws(shape);
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        Rng episode_rng(rng.next_u64());
        total += run_episode(genome, shape, map, env, episode_rng, &ws, act);
    }
    return total;
}

double LakeEvaluator::score(const Genome& genome, Rng rng) const {
    count_episodes(static_cast<uint64_t>(episodes_per_eval_));
    return evaluate_fitness(genome, shape_, map_, env_, episodes_per_eval_, rng,
                            activation_);
}

} // namespace neuro
