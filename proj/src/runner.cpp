#include "neuro/runner.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace fs = std::filesystem;

namespace neuro {

namespace {

RunResult run_one(const ExperimentConfig& config, int run_index, int jobs) {
    // Every run gets its own evaluator so episode accounting stays per-run.
    LakeEvaluator evaluator = config.make_evaluator();
    uint64_t seed = Rng::derive(config.master_seed,
                                {streams::kRun, static_cast<uint64_t>(run_index)});
    RunOptions opts;
    opts.jobs = jobs;
    switch (config.algorithm) {
        case AlgorithmKind::Baseline:
            return run_baseline(config.ga, evaluator, seed, opts);
        case AlgorithmKind::MSM:
            return run_msm(config.ga, config.msm, evaluator, seed, opts);
        case AlgorithmKind::Directed:
            return run_directed(config.ga, config.directed, evaluator, seed, opts);
    }
    throw ConfigError("unhandled algorithm");
}

} // namespace

CampaignResult run_campaign(const ExperimentConfig& config, const RunProgress& progress) {
    config.validate();
    if (config.algorithm == AlgorithmKind::Directed) {
        LakeMap map = config.make_map();
        config.directed.validate_for(config.make_shape(map));
    }

    CampaignResult result;
    result.config = config;
    result.runs.resize(config.runs);

    const int workers = std::min(config.jobs, config.runs);
    const int inner_jobs = std::max(1, config.jobs / std::max(1, workers));

    if (workers <= 1) {
        for (int r = 0; r < config.runs; ++r) {
            result.runs[r] = run_one(config, r, config.jobs);
            if (progress) progress(r, result.runs[r]);
        }
        return result;
    }

    std::atomic<int> next{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= config.runs) return;
            try {
                result.runs[r] = run_one(config, r, inner_jobs);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(r, result.runs[r]);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return result;
}

CampaignResult run_and_archive(const ExperimentConfig& config, const RunProgress& progress) {
    CampaignResult result = run_campaign(config, progress);
    write_archive(result, config.output_dir);
    return result;
}

std::vector<EvalReport> evaluate_champions(const LoadedArchive& archive,
                                           int episodes, uint64_t seed, int run) {
    if (episodes < 1) throw ConfigError("episodes must be >= 1");

    LakeMap map = archive.config.make_map();
    NetworkShape expected = archive.config.make_shape(map);
    EnvConfig env = archive.config.env;

    std::vector<int> run_indices;
    if (run >= 0) {
        run_indices.push_back(run);
    } else {
        for (const RunSummaryRecord& rec : archive.summaries) run_indices.push_back(rec.run);
    }

    std::vector<EvalReport> reports;
    for (int r : run_indices) {
        NetworkShape shape = expected;
        Genome champion = read_genome_file(champion_path(archive.dir, r), &shape);
        if (!(shape == expected))
            throw IoError("champion shape disagrees with the archive config");
        Rng rng(Rng::derive(seed, {streams::kCliEval, static_cast<uint64_t>(r)}));
        double total = evaluate_fitness(champion, shape, map, env, episodes, rng,
                                        archive.config.activation);
        EvalReport rep;
        rep.run = r;
        rep.mean_score = total / episodes;
        rep.solved = rep.mean_score >= env.solve_bar;
        reports.push_back(rep);
    }
    return reports;
}

ReportFiles write_report(const std::vector<LoadedArchive>& archives,
                         const std::string& baseline_tag, int at_generation,
                         double alpha, const std::string& out_dir) {
    if (archives.empty()) throw InputError("report needs at least one archive");

    std::vector<RunSet> sets;
    for (const LoadedArchive& a : archives) sets.push_back(a.padded_runset());
    const int horizon = sets[0].horizon();
    for (const RunSet& s : sets)
        if (s.horizon() != horizon)
            throw InputError("archives do not share a generation horizon after padding");
    if (at_generation < 0) at_generation = horizon - 1;

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create report directory " + out_dir);

    auto write_median_csv = [&](LogField field, const std::string& name) {
        std::vector<std::vector<double>> curves;
        for (const RunSet& s : sets) curves.push_back(median_curve(s, field));
        std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
        if (!out) throw IoError("cannot write " + name);
        out << "generation";
        for (const RunSet& s : sets) out << ',' << s.algorithm << "_median";
        out << "\n";
        for (int g = 0; g < horizon; ++g) {
            out << g;
            for (const auto& curve : curves) out << ',' << format_double(curve[g]);
            out << "\n";
        }
    };
    write_median_csv(LogField::TopScore, "medians_top_score.csv");
    write_median_csv(LogField::MeanScore, "medians_mean_score.csv");

    ReportFiles files;
    const RunSet* baseline = nullptr;
    for (const RunSet& s : sets)
        if (s.algorithm == baseline_tag) baseline = &s;

    std::ostringstream text;
    text << "archives: ";
    for (size_t i = 0; i < sets.size(); ++i)
        text << (i ? ", " : "") << sets[i].algorithm << " (" << sets[i].runs.size()
             << " runs)";
    text << "\nhorizon: " << horizon << " generations\n";

    if (baseline) {
        for (const RunSet& s : sets) {
            if (&s == baseline) continue;
            for (LogField field : {LogField::TopScore, LogField::MeanScore}) {
                SignificanceReport rep =
                    compare_algorithms(s, *baseline, field, at_generation, alpha);
                files.significance.push_back(rep);
                text << rep.to_text() << "\n";
            }
        }
    } else {
        text << "no archive tagged '" << baseline_tag << "'; medians only\n";
    }

    nlohmann::json j = nlohmann::json::array();
    for (const SignificanceReport& rep : files.significance) {
        j.push_back({{"comparison", rep.comparison},
                     {"field", rep.field},
                     {"at_generation", rep.at_generation},
                     {"n_a", rep.n_a},
                     {"n_b", rep.n_b},
                     {"u_a", rep.u_a},
                     {"u_b", rep.u_b},
                     {"p", rep.p},
                     {"median_a", rep.median_a},
                     {"median_b", rep.median_b},
                     {"alpha", rep.alpha},
                     {"significant", rep.significant},
                     {"method", rep.method == MWMethod::Exact ? "exact" : "normal_approx"}});
    }
    std::ofstream jf(fs::path(out_dir) / "significance.json", std::ios::binary);
    if (!jf) throw IoError("cannot write significance.json");
    jf << j.dump(2) << "\n";

    files.text = text.str();
    std::ofstream tf(fs::path(out_dir) / "report.txt", std::ios::binary);
    if (!tf) throw IoError("cannot write report.txt");
    tf << files.text;
    return files;
}

} // namespace neuro
