// Command-line front end: seeded experiment campaigns (`run`), median and
// significance reports (`report`), and champion re-evaluation (`eval`).

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "neuro/runner.hpp"

namespace {

int run_command(const std::string& config_path, const CLI::App& cmd,
                neuro::ExperimentConfig cfg) {
    using neuro::AlgorithmKind;

    if (cfg.output_dir.empty()) {
        const char* env_out = std::getenv("NEUROEVO_OUT");
        if (env_out && *env_out) cfg.output_dir = env_out;
    }
    if (cfg.output_dir.empty())
        throw neuro::ConfigError("no output directory (use --out or NEUROEVO_OUT)");

    cfg.validate();
    std::cout << "algorithm=" << to_string(cfg.algorithm) << " runs=" << cfg.runs
              << " seed=" << cfg.master_seed << " generations="
              << cfg.ga.max_generations << " out=" << cfg.output_dir << "\n";

    neuro::CampaignResult result = neuro::run_and_archive(
        cfg, [&](int run, const neuro::RunResult& r) {
            std::cout << "run " << run << ": " << r.logs.size() << " generations, "
                      << (r.solved ? "solved at generation " +
                                         std::to_string(r.solve_generation)
                                   : std::string("not solved"))
                      << ", final top " << r.logs.back().top_score << "\n";
        });

    int solved = 0;
    for (const neuro::RunResult& r : result.runs) solved += r.solved ? 1 : 0;
    std::cout << "archive written to " << cfg.output_dir << " (" << solved << "/"
              << cfg.runs << " runs solved)\n";
    (void)config_path;
    (void)cmd;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution experiments on the slippery gridworld"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Execute a seeded campaign and write an archive");
    std::string config_path, algorithm, map_path, out_dir;
    uint64_t seed = 0;
    int runs = 0, generations = 0, population = 0, msm_steps = 0, jobs = 0;
    double elite_frac = 0.0, zeta = 0.0, density = 0.0;
    run->add_option("--config", config_path, "Config file (flat key = value with sections)");
    auto* o_alg = run->add_option("--algorithm", algorithm, "baseline | msm | directed");
    auto* o_seed = run->add_option("--seed", seed, "Master seed (64-bit)");
    auto* o_runs = run->add_option("--runs", runs, "Independent runs in the campaign");
    auto* o_gens = run->add_option("--generations", generations, "Generation budget per run");
    auto* o_pop = run->add_option("--population", population, "Population size");
    auto* o_elite = run->add_option("--elite-frac", elite_frac, "Elite fraction in (0, 1]");
    auto* o_msm = run->add_option("--msm-steps", msm_steps, "Extra crossover+mutation rounds");
    auto* o_zeta = run->add_option("--zeta", zeta, "Fraction pruned in directed crossover");
    auto* o_dens = run->add_option("--density", density, "Initial mask density");
    auto* o_map = run->add_option("--map", map_path, "Map file (rows of S/F/H/G)");
    auto* o_out = run->add_option("--out", out_dir, "Output directory (or NEUROEVO_OUT)");
    auto* o_jobs = run->add_option("--jobs", jobs, "Worker threads");

    // --- report ---
    auto* report = app.add_subcommand("report", "Median curves and significance vs a baseline");
    std::vector<std::string> archives;
    std::string baseline_tag = "baseline", report_out;
    int at_generation = -1;
    double alpha = 0.01;
    report->add_option("archives", archives, "Archive directories")->required();
    report->add_option("--baseline", baseline_tag, "Algorithm tag treated as baseline");
    report->add_option("--at-generation", at_generation,
                       "Generation compared (default: last)");
    report->add_option("--alpha", alpha, "Significance level");
    report->add_option("--out", report_out, "Report directory (default: first archive)");

    // --- eval ---
    auto* eval = app.add_subcommand("eval", "Re-evaluate archived champions on fresh episodes");
    std::string eval_archive, which = "champion";
    int episodes = 100, eval_run = -1;
    uint64_t eval_seed = 1;
    eval->add_option("archive", eval_archive, "Archive directory")->required();
    eval->add_option("--which", which, "What to evaluate (champion)");
    eval->add_option("--episodes", episodes, "Fresh episodes per champion");
    eval->add_option("--seed", eval_seed, "Evaluation seed");
    eval->add_option("--run", eval_run, "Single run index (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            neuro::ExperimentConfig cfg;
            if (!config_path.empty()) cfg = neuro::load_config(config_path);
            if (*o_alg) cfg.algorithm = neuro::algorithm_from_string(algorithm);
            if (*o_seed) cfg.master_seed = seed;
            if (*o_runs) cfg.runs = runs;
            if (*o_gens) cfg.ga.max_generations = generations;
            if (*o_pop) cfg.ga.population_size = population;
            if (*o_elite) cfg.ga.elite_fraction = elite_frac;
            if (*o_msm) cfg.msm.extra_steps = msm_steps;
            if (*o_zeta) cfg.directed.zeta = zeta;
            if (*o_dens) cfg.directed.density = density;
            if (*o_map) cfg.map_path = map_path;
            if (*o_out) cfg.output_dir = out_dir;
            if (*o_jobs) cfg.jobs = jobs;
            return run_command(config_path, *run, std::move(cfg));
        }

        if (*report) {
            std::vector<neuro::LoadedArchive> loaded;
            for (const std::string& dir : archives)
                loaded.push_back(neuro::load_archive(dir));
            if (report_out.empty()) report_out = archives.front();
            neuro::ReportFiles files = neuro::write_report(loaded, baseline_tag,
                                                           at_generation, alpha, report_out);
            std::cout << files.text;
            std::cout << "report written to " << report_out << "\n";
            return 0;
        }

        if (*eval) {
            if (which != "champion")
                throw neuro::ConfigError("only --which champion is supported");
            neuro::LoadedArchive archive = neuro::load_archive(eval_archive);
            std::vector<neuro::EvalReport> reports =
                neuro::evaluate_champions(archive, episodes, eval_seed, eval_run);
            double bar = archive.config.env.solve_bar;
            for (const neuro::EvalReport& r : reports) {
                std::cout << "run " << r.run << ": mean per-episode score "
                          << neuro::format_double(r.mean_score) << " over " << episodes
                          << " episodes -> " << (r.solved ? "solved" : "unsolved")
                          << " (bar " << neuro::format_double(bar) << ")\n";
            }
            return 0;
        }
    } catch (const neuro::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const neuro::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const neuro::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
