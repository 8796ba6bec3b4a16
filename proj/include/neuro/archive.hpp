#ifndef NEURO_ARCHIVE_HPP
#define NEURO_ARCHIVE_HPP

#include <string>
#include <vector>

#include "neuro/config.hpp"
#include "neuro/log.hpp"

namespace neuro {

// A results archive is a directory:
//   config.ini       exact config snapshot; re-running it reproduces the
//                    archive byte for byte
//   rng.txt          generator specification and test vectors
//   run_NNN.csv      one GenerationLog row per generation
//   runs.csv         per-run summary (seed, length, solve data)
//   champion_NNN.bin final champion genome, little-endian binary
//   meta.txt         timestamp sidecar, excluded from determinism checks

struct RunSummaryRecord {
    int run = 0;
    uint64_t seed = 0;
    int generations = 0;
    bool solved = false;
    int solve_generation = -1;       // verified solve, -1 if none
    int first_solve_generation = -1; // first top_score >= bar, -1 if none
};

struct CampaignResult {
    ExperimentConfig config;
    std::vector<RunResult> runs;
};

struct LoadedArchive {
    ExperimentConfig config;
    std::string tag; // algorithm name
    std::vector<std::vector<GenerationLog>> runs;
    std::vector<RunSummaryRecord> summaries;
    std::string dir;

    // Runs padded to the config's generation budget.
    RunSet padded_runset() const;
};

void write_archive(const CampaignResult& result, const std::string& dir);
LoadedArchive load_archive(const std::string& dir);

// Champion genome file IO. Dense genomes store every weight; sparse ones
// store the mask as a packed bitset followed by the nonzero values.
void write_genome_file(const std::string& path, const Genome& genome,
                       const NetworkShape& shape, bool sparse);
Genome read_genome_file(const std::string& path, NetworkShape* shape_out = nullptr);

std::string champion_path(const std::string& dir, int run);

// CSV helpers shared with the report writer.
std::string generation_log_csv_header();
std::string generation_log_csv_row(const GenerationLog& log);
std::vector<GenerationLog> read_log_csv(const std::string& path);

// Human-readable description of the random number generator, embedded in
// every archive so results stay interpretable away from the source tree.
std::string rng_specification();

} // namespace neuro

#endif
