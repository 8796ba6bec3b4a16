#include "neuro/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace neuro {

std::string to_string(AlgorithmKind a) {
    switch (a) {
        case AlgorithmKind::Baseline: return "baseline";
        case AlgorithmKind::MSM: return "msm";
        case AlgorithmKind::Directed: return "directed";
    }
    return "baseline";
}

AlgorithmKind algorithm_from_string(const std::string& name) {
    if (name == "baseline") return AlgorithmKind::Baseline;
    if (name == "msm") return AlgorithmKind::MSM;
    if (name == "directed") return AlgorithmKind::Directed;
    throw ConfigError("unknown algorithm '" + name + "' (expected baseline, msm, or directed)");
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc())
        throw Error("cannot format double");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || end != begin + text.size())
        throw ConfigError("bad numeric value '" + text + "'");
    return v;
}

void ExperimentConfig::validate() const {
    ga.validate();
    msm.validate();
    directed.validate();
    if (env.step_cap < 1) throw ConfigError("step cap must be >= 1");
    if (env.solve_bar <= 0.0 || env.solve_bar > 1.0)
        throw ConfigError("solve bar must lie in (0, 1]");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    if (hidden_layers.empty()) throw ConfigError("at least one hidden layer required");
    for (int h : hidden_layers)
        if (h < 1) throw ConfigError("hidden layer sizes must be >= 1");
}

LakeMap ExperimentConfig::make_map() const {
    return map_path ? LakeMap::load(*map_path) : LakeMap::default_4x4();
}

NetworkShape ExperimentConfig::make_shape(const LakeMap& map) const {
    std::vector<int> sizes;
    sizes.push_back(map.cell_count());
    sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
    sizes.push_back(4);
    return NetworkShape(sizes);
}

LakeEvaluator ExperimentConfig::make_evaluator() const {
    LakeMap map = make_map();
    NetworkShape shape = make_shape(map);
    return LakeEvaluator(std::move(map), std::move(shape), env,
                         ga.episodes_per_eval, activation);
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    long long v = std::strtoll(begin, &end, 10);
    if (end == begin || end != begin + text.size())
        throw ConfigError("bad integer value '" + text + "'");
    return v;
}

uint64_t parse_u64(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || end != begin + text.size())
        throw ConfigError("bad unsigned value '" + text + "'");
    return v;
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("bad boolean value '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(static_cast<int>(parse_int(cur)));
    }
    if (out.empty()) throw ConfigError("empty list value '" + text + "'");
    return out;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section != "ga" && section != "msm" && section != "directed" &&
                section != "env" && section != "net")
                throw ConfigError("unknown config section [" + section + "]");
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));

        if (section.empty()) {
            if (key == "algorithm") cfg.algorithm = algorithm_from_string(value);
            else if (key == "runs") cfg.runs = static_cast<int>(parse_int(value));
            else if (key == "master_seed") cfg.master_seed = parse_u64(value);
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "map_path") {
                if (!value.empty()) cfg.map_path = value;
            } else if (key == "jobs") cfg.jobs = static_cast<int>(parse_int(value));
            else throw ConfigError("unknown config key '" + key + "'");
        } else if (section == "ga") {
            if (key == "population_size") cfg.ga.population_size = static_cast<int>(parse_int(value));
            else if (key == "elite_fraction") cfg.ga.elite_fraction = parse_double(value);
            else if (key == "mutation_sigma0") cfg.ga.mutation_sigma0 = parse_double(value);
            else if (key == "mutation_decay") cfg.ga.mutation_decay = parse_double(value);
            else if (key == "min_sigma") cfg.ga.min_sigma = parse_double(value);
            else if (key == "episodes_per_eval") cfg.ga.episodes_per_eval = static_cast<int>(parse_int(value));
            else if (key == "max_generations") cfg.ga.max_generations = static_cast<int>(parse_int(value));
            else throw ConfigError("unknown [ga] key '" + key + "'");
        } else if (section == "msm") {
            if (key == "extra_steps") cfg.msm.extra_steps = static_cast<int>(parse_int(value));
            else if (key == "comparison") {
                if (value == "mean") cfg.msm.comparison = FitnessAggregate::Mean;
                else if (value == "max") cfg.msm.comparison = FitnessAggregate::Max;
                else throw ConfigError("comparison must be mean or max");
            } else if (key == "distance_aggregate") {
                if (value == "mean_to_all") cfg.msm.distance_aggregate = DistanceAggregate::MeanToAll;
                else if (value == "min_to_any") cfg.msm.distance_aggregate = DistanceAggregate::MinToAny;
                else throw ConfigError("distance_aggregate must be mean_to_all or min_to_any");
            } else throw ConfigError("unknown [msm] key '" + key + "'");
        } else if (section == "directed") {
            if (key == "zeta") cfg.directed.zeta = parse_double(value);
            else if (key == "density") cfg.directed.density = parse_double(value);
            else if (key == "regrow_sigma") {
                if (value == "track") cfg.directed.regrow_sigma.reset();
                else cfg.directed.regrow_sigma = parse_double(value);
            } else if (key == "dense_mutation") cfg.directed.dense_mutation = parse_bool(value);
            else throw ConfigError("unknown [directed] key '" + key + "'");
        } else if (section == "env") {
            if (key == "step_cap") cfg.env.step_cap = static_cast<int>(parse_int(value));
            else if (key == "slippery") cfg.env.slippery = parse_bool(value);
            else if (key == "slippery_start") cfg.env.slippery_start = parse_bool(value);
            else if (key == "solve_bar") cfg.env.solve_bar = parse_double(value);
            else throw ConfigError("unknown [env] key '" + key + "'");
        } else if (section == "net") {
            if (key == "hidden") cfg.hidden_layers = parse_int_list(value);
            else if (key == "activation") {
                if (value == "relu") cfg.activation = Activation::ReLU;
                else if (value == "tanh") cfg.activation = Activation::Tanh;
                else throw ConfigError("activation must be relu or tanh");
            } else throw ConfigError("unknown [net] key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string write_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "algorithm = " << to_string(cfg.algorithm) << "\n";
    os << "runs = " << cfg.runs << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    os << "map_path = " << (cfg.map_path ? *cfg.map_path : "") << "\n";
    os << "jobs = " << cfg.jobs << "\n";
    os << "\n[net]\n";
    os << "hidden = ";
    for (size_t i = 0; i < cfg.hidden_layers.size(); ++i)
        os << (i ? "," : "") << cfg.hidden_layers[i];
    os << "\n";
    os << "activation = " << (cfg.activation == Activation::ReLU ? "relu" : "tanh") << "\n";
    os << "\n[ga]\n";
    os << "population_size = " << cfg.ga.population_size << "\n";
    os << "elite_fraction = " << format_double(cfg.ga.elite_fraction) << "\n";
    os << "mutation_sigma0 = " << format_double(cfg.ga.mutation_sigma0) << "\n";
    os << "mutation_decay = " << format_double(cfg.ga.mutation_decay) << "\n";
    os << "min_sigma = " << format_double(cfg.ga.min_sigma) << "\n";
    os << "episodes_per_eval = " << cfg.ga.episodes_per_eval << "\n";
    os << "max_generations = " << cfg.ga.max_generations << "\n";
    os << "\n[msm]\n";
    os << "extra_steps = " << cfg.msm.extra_steps << "\n";
    os << "comparison = "
       << (cfg.msm.comparison == FitnessAggregate::Mean ? "mean" : "max") << "\n";
    os << "distance_aggregate = "
       << (cfg.msm.distance_aggregate == DistanceAggregate::MeanToAll ? "mean_to_all"
                                                                      : "min_to_any")
       << "\n";
    os << "\n[directed]\n";
    os << "zeta = " << format_double(cfg.directed.zeta) << "\n";
    os << "density = " << format_double(cfg.directed.density) << "\n";
    os << "regrow_sigma = "
       << (cfg.directed.regrow_sigma ? format_double(*cfg.directed.regrow_sigma)
                                     : std::string("track"))
       << "\n";
    os << "dense_mutation = " << (cfg.directed.dense_mutation ? "true" : "false") << "\n";
    os << "\n[env]\n";
    os << "step_cap = " << cfg.env.step_cap << "\n";
    os << "slippery = " << (cfg.env.slippery ? "true" : "false") << "\n";
    os << "slippery_start = " << (cfg.env.slippery_start ? "true" : "false") << "\n";
    os << "solve_bar = " << format_double(cfg.env.solve_bar) << "\n";
    return os.str();
}

} // namespace neuro
