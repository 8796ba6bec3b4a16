#ifndef NEURO_CONFIG_HPP
#define NEURO_CONFIG_HPP

#include <optional>
#include <string>

#include "neuro/ga.hpp"
#include "neuro/msm.hpp"
#include "neuro/sparse.hpp"

namespace neuro {

enum class AlgorithmKind { Baseline, MSM, Directed };

std::string to_string(AlgorithmKind a);
AlgorithmKind algorithm_from_string(const std::string& name);

// Everything a campaign needs: the algorithm variant, seeds, the GA and
// operator settings, the environment, and where results go. Defaults
// reproduce the reference setting out of the box.
struct ExperimentConfig {
    AlgorithmKind algorithm = AlgorithmKind::Baseline;
    GAConfig ga;
    MSMConfig msm;
    DirectedConfig directed;
    EnvConfig env;
    std::vector<int> hidden_layers = {10, 10};
    Activation activation = Activation::ReLU;
    std::optional<std::string> map_path;
    int runs = 10;
    uint64_t master_seed = 1;
    std::string output_dir;
    int jobs = 1;

    void validate() const;

    // Map named by map_path, or the canonical 4x4 layout.
    LakeMap make_map() const;
    // input = map cell count, then the hidden layers, then 4 actions.
    NetworkShape make_shape(const LakeMap& map) const;
    LakeEvaluator make_evaluator() const;
};

// Flat key/value text with one [section] per sub-config. Unknown keys are
// rejected so typos cannot silently fall back to defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical snapshot; parse_config(write_config(c)) == c.
std::string write_config(const ExperimentConfig& config);

// Shortest round-trip decimal form, locale independent.
std::string format_double(double value);
double parse_double(const std::string& text);

} // namespace neuro

#endif
