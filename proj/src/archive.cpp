#include "neuro/archive.hpp"

#include <cmath>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace neuro {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string run_basename(int run) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%03d", run);
    return buf;
}

void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

struct ByteReader {
    const std::string& data;
    size_t pos = 0;

    uint8_t u8() {
        if (pos + 1 > data.size()) throw IoError("genome file truncated");
        return static_cast<uint8_t>(data[pos++]);
    }
    uint16_t u16() {
        uint16_t v = u8();
        v |= static_cast<uint16_t>(u8()) << 8;
        return v;
    }
    uint32_t u32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(u8()) << (8 * i);
        return v;
    }
    double f64() {
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(u8()) << (8 * i);
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
};

constexpr char kMagic[4] = {'N', 'E', 'V', 'G'};
constexpr uint16_t kGenomeVersion = 1;

} // namespace

std::string generation_log_csv_header() {
    return "generation,top_score,mean_score,sigma,branch,env_episodes_used";
}

std::string generation_log_csv_row(const GenerationLog& log) {
    std::ostringstream os;
    os << log.generation << ',' << format_double(log.top_score) << ','
       << format_double(log.mean_score) << ',' << format_double(log.sigma) << ','
       << (log.branch ? to_string(*log.branch) : std::string("-")) << ','
       << log.env_episodes_used;
    return os.str();
}

std::vector<GenerationLog> read_log_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open log file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != generation_log_csv_header())
        throw IoError("bad log header in " + path);

    std::vector<GenerationLog> logs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        GenerationLog log;
        std::getline(row, field, ',');
        log.generation = std::stoi(field);
        std::getline(row, field, ',');
        log.top_score = parse_double(field);
        std::getline(row, field, ',');
        log.mean_score = parse_double(field);
        std::getline(row, field, ',');
        log.sigma = parse_double(field);
        std::getline(row, field, ',');
        if (field == "accepted") log.branch = Branch::Accepted;
        else if (field == "rejected") log.branch = Branch::Rejected;
        else if (field != "-") throw IoError("bad branch value '" + field + "' in " + path);
        if (!std::getline(row, field, ','))
            throw IoError("short log row in " + path);
        log.env_episodes_used = std::stoull(field);
        logs.push_back(log);
    }
    if (logs.empty()) throw IoError("empty log file: " + path);
    return logs;
}

void write_genome_file(const std::string& path, const Genome& genome,
                       const NetworkShape& shape, bool sparse) {
    if (static_cast<int>(genome.size()) != shape.parameter_count())
        throw ShapeError("genome length does not match the shape");

    std::string out;
    out.append(kMagic, 4);
    put_u16(out, kGenomeVersion);
    out.push_back(sparse ? 1 : 0);
    out.push_back(static_cast<char>(shape.num_layers()));
    for (int s : shape.layer_sizes()) put_u32(out, static_cast<uint32_t>(s));

    if (!sparse) {
        for (double w : genome) put_f64(out, w);
    } else {
        uint32_t nnz = 0;
        for (double w : genome)
            if (w != 0.0) ++nnz;
        put_u32(out, nnz);
        // Mask bits packed LSB-first within each byte, connection order.
        size_t nbytes = (genome.size() + 7) / 8;
        std::string bits(nbytes, '\0');
        for (size_t i = 0; i < genome.size(); ++i)
            if (genome[i] != 0.0) bits[i / 8] |= static_cast<char>(1u << (i % 8));
        out += bits;
        for (double w : genome)
            if (w != 0.0) put_f64(out, w);
    }
    write_text_file(path, out);
}

Genome read_genome_file(const std::string& path, NetworkShape* shape_out) {
    std::string data = read_text_file(path);
    ByteReader r{data};
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a genome file: " + path);
    if (r.u16() != kGenomeVersion) throw IoError("unsupported genome version in " + path);
    uint8_t sparse = r.u8();
    if (sparse > 1) throw IoError("bad genome format flag in " + path);
    int layers = r.u8();
    if (layers < 2) throw IoError("bad layer count in " + path);
    std::vector<int> sizes(layers);
    for (int& s : sizes) {
        uint32_t v = r.u32();
        if (v == 0 || v > 1'000'000) throw IoError("bad layer size in " + path);
        s = static_cast<int>(v);
    }
    NetworkShape shape(sizes);
    Genome genome(shape.parameter_count(), 0.0);

    if (!sparse) {
        for (double& w : genome) w = r.f64();
    } else {
        uint32_t nnz = r.u32();
        if (nnz > genome.size()) throw IoError("bad nonzero count in " + path);
        size_t nbytes = (genome.size() + 7) / 8;
        std::vector<uint8_t> bits(nbytes);
        for (uint8_t& b : bits) b = r.u8();
        uint32_t seen = 0;
        for (size_t i = 0; i < genome.size(); ++i) {
            if (bits[i / 8] & (1u << (i % 8))) {
                genome[i] = r.f64();
                ++seen;
            }
        }
        if (seen != nnz) throw IoError("mask popcount disagrees with nonzero count in " + path);
    }
    if (r.pos != data.size()) throw IoError("trailing bytes in " + path);
    for (double w : genome)
        if (!std::isfinite(w)) throw IoError("non-finite weight in " + path);
    if (shape_out) *shape_out = shape;
    return genome;
}

std::string champion_path(const std::string& dir, int run) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "champion_%03d.bin", run);
    return (fs::path(dir) / buf).string();
}

std::string rng_specification() {
    return
        "generator: SplitMix64 (counter-based)\n"
        "state update: s += 0x9e3779b97f4a7c15\n"
        "output: mix64(s) where mix64(z): z^=z>>30, z*=0xbf58476d1ce4e5b9,\n"
        "        z^=z>>27, z*=0x94d049bb133111eb, z^=z>>31\n"
        "test vectors (seed 0): e220a8397b1dcdaf 6e789e6aa1b965f4 06c45d188009454f\n"
        "uniform double: (next_u64() >> 11) * 2^-53\n"
        "normal: Box-Muller cosine branch, sqrt(-2 ln(1-u1)) * cos(2 pi u2)\n"
        "substreams: fold64(seed, c) = mix64(seed ^ mix64(c + 0x9e3779b97f4a7c15));\n"
        "run seed = fold64(fold64(master_seed, 7), run_index); streams fold\n"
        "(tag, generation, member) with tags init=1 mask=2 eval=3 breed=4\n"
        "solve=5 msm_eval=6 run=7 cli_eval=8; per-episode seeds are drawn\n"
        "from the member stream as raw next_u64() values.\n";
}

void write_archive(const CampaignResult& result, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    if (!fs::is_directory(dir)) throw IoError("output path is not a directory: " + dir);

    write_text_file((fs::path(dir) / "config.ini").string(), write_config(result.config));
    write_text_file((fs::path(dir) / "rng.txt").string(), rng_specification());

    LakeMap map = result.config.make_map();
    NetworkShape shape = result.config.make_shape(map);
    const double bar =
        result.config.env.solve_bar * result.config.ga.episodes_per_eval;

    std::ostringstream runs_csv;
    runs_csv << "run,seed,generations,solved,solve_generation,first_solve_generation\n";
    for (size_t r = 0; r < result.runs.size(); ++r) {
        const RunResult& run = result.runs[r];
        std::ostringstream log_csv;
        log_csv << generation_log_csv_header() << "\n";
        for (const GenerationLog& log : run.logs)
            log_csv << generation_log_csv_row(log) << "\n";
        write_text_file((fs::path(dir) / (run_basename(static_cast<int>(r)) + ".csv")).string(),
                        log_csv.str());
        write_genome_file(champion_path(dir, static_cast<int>(r)), run.champion, shape,
                          run.sparse_champion);

        runs_csv << r << ',' << run.seed << ',' << run.logs.size() << ','
                 << (run.solved ? 1 : 0) << ',' << run.solve_generation << ','
                 << first_generation_at_or_above(run.logs, bar) << "\n";
    }
    write_text_file((fs::path(dir) / "runs.csv").string(), runs_csv.str());

    // Wall-clock context lives apart from the reproducible payload.
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    write_text_file((fs::path(dir) / "meta.txt").string(),
                    std::string("written_at = ") + stamp + "\n");
}

LoadedArchive load_archive(const std::string& dir) {
    LoadedArchive archive;
    archive.dir = dir;
    archive.config = load_config((fs::path(dir) / "config.ini").string());
    archive.tag = to_string(archive.config.algorithm);

    std::string runs_csv = read_text_file((fs::path(dir) / "runs.csv").string());
    std::istringstream in(runs_csv);
    std::string line;
    if (!std::getline(in, line) ||
        line != "run,seed,generations,solved,solve_generation,first_solve_generation")
        throw IoError("bad runs.csv header in " + dir);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        RunSummaryRecord rec;
        std::getline(row, field, ',');
        rec.run = std::stoi(field);
        std::getline(row, field, ',');
        rec.seed = std::stoull(field);
        std::getline(row, field, ',');
        rec.generations = std::stoi(field);
        std::getline(row, field, ',');
        rec.solved = field == "1";
        std::getline(row, field, ',');
        rec.solve_generation = std::stoi(field);
        if (!std::getline(row, field, ','))
            throw IoError("short runs.csv row in " + dir);
        rec.first_solve_generation = std::stoi(field);
        archive.summaries.push_back(rec);
    }
    if (archive.summaries.empty()) throw IoError("runs.csv lists no runs in " + dir);

    for (const RunSummaryRecord& rec : archive.summaries) {
        std::string path = (fs::path(dir) / (run_basename(rec.run) + ".csv")).string();
        archive.runs.push_back(read_log_csv(path));
    }
    return archive;
}

RunSet LoadedArchive::padded_runset() const {
    return RunSet::padded(tag, runs, config.ga.max_generations);
}

} // namespace neuro
