#ifndef NEURO_RUNNER_HPP
#define NEURO_RUNNER_HPP

#include <functional>
#include <string>

#include "neuro/archive.hpp"
#include "neuro/config.hpp"
#include "neuro/stats.hpp"

namespace neuro {

// Called after each finished run with (run index, its result).
using RunProgress = std::function<void(int, const RunResult&)>;

// Execute config.runs independent seeded runs of the configured algorithm.
// Runs are distributed over config.jobs workers; scheduling never changes
// the results because every random stream is derived from
// (master_seed, run, ...).
CampaignResult run_campaign(const ExperimentConfig& config,
                            const RunProgress& progress = nullptr);

// run_campaign + write_archive into config.output_dir.
CampaignResult run_and_archive(const ExperimentConfig& config,
                               const RunProgress& progress = nullptr);

struct EvalReport {
    int run = 0;
    double mean_score = 0.0; // per-episode mean over the fresh evaluation
    bool solved = false;
};

// Re-evaluate archived champions over fresh episodes; `run` of -1 means
// every run in the archive.
std::vector<EvalReport> evaluate_champions(const LoadedArchive& archive,
                                           int episodes, uint64_t seed,
                                           int run = -1);

struct ReportFiles {
    std::vector<SignificanceReport> significance;
    std::string text; // human-readable summary
};

// Median curves per archive (top and mean score CSVs) plus Mann-Whitney
// comparisons of every non-baseline archive against the baseline-tagged
// one, written under out_dir.
ReportFiles write_report(const std::vector<LoadedArchive>& archives,
                         const std::string& baseline_tag, int at_generation,
                         double alpha, const std::string& out_dir);

} // namespace neuro

#endif
