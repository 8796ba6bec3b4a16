#include "neuro/log.hpp"

#include "neuro/errors.hpp"

namespace neuro {

std::string to_string(Branch b) {
    return b == Branch::Accepted ? "accepted" : "rejected";
}

RunSet RunSet::padded(std::string algorithm,
                      std::vector<std::vector<GenerationLog>> runs, int horizon) {
    if (horizon < 1) throw InputError("run set horizon must be >= 1");
    for (std::vector<GenerationLog>& run : runs) {
        if (run.empty()) throw InputError("run set contains an empty run");
        if (static_cast<int>(run.size()) > horizon)
            throw InputError("run longer than the requested horizon");
        GenerationLog last = run.back();
        while (static_cast<int>(run.size()) < horizon) {
            GenerationLog pad = last;
            pad.generation = static_cast<int>(run.size());
            pad.padded = true;
            pad.env_episodes_used = 0;
            run.push_back(pad);
        }
    }
    RunSet set;
    set.algorithm = std::move(algorithm);
    set.runs = std::move(runs);
    return set;
}

double log_field(const GenerationLog& log, LogField field) {
    return field == LogField::TopScore ? log.top_score : log.mean_score;
}

int first_generation_at_or_above(const std::vector<GenerationLog>& logs, double bar) {
    for (const GenerationLog& log : logs)
        if (!log.padded && log.top_score >= bar) return log.generation;
    return -1;
}

} // namespace neuro
