#ifndef NEURO_LOG_HPP
#define NEURO_LOG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace neuro {

enum class Branch { Accepted, Rejected };

std::string to_string(Branch b);

// One generation's record: the top performer's score, the population mean,
// the mutation sigma in force, which MSM branch fired (when applicable),
// and how many environment episodes the generation consumed.
struct GenerationLog {
    int generation = 0;
    double top_score = 0.0;
    double mean_score = 0.0;
    double sigma = 0.0;
    std::optional<Branch> branch;
    uint64_t env_episodes_used = 0;
    bool padded = false; // true on rows carried forward past an early stop
};

// Outcome of a single seeded run.
struct RunResult {
    std::vector<GenerationLog> logs;
    std::vector<double> champion;  // top performer of the final generation
    bool sparse_champion = false;  // serialize mask + packed values if true
    bool solved = false;           // verified >= solve_bar on a fresh evaluation
    int solve_generation = -1;     // generation of the verified solve, or -1
    uint64_t seed = 0;
};

// A set of runs of one algorithm, padded to a common generation horizon by
// carrying each run's final row forward (padded rows are flagged).
struct RunSet {
    std::string algorithm;
    std::vector<std::vector<GenerationLog>> runs;

    static RunSet padded(std::string algorithm,
                         std::vector<std::vector<GenerationLog>> runs,
                         int horizon);
    int horizon() const {
        return runs.empty() ? 0 : static_cast<int>(runs[0].size());
    }
};

enum class LogField { TopScore, MeanScore };

double log_field(const GenerationLog& log, LogField field);

// First generation whose top score reaches `bar`, or -1 if none does.
int first_generation_at_or_above(const std::vector<GenerationLog>& logs, double bar);

} // namespace neuro

#endif
