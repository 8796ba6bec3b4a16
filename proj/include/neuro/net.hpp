#ifndef NEURO_NET_HPP
#define NEURO_NET_HPP

#include <vector>

#include "neuro/errors.hpp"

namespace neuro {

// Flat weight vector for a fixed-topology feedforward network.
// Layout: layer by layer; within a layer, output-neuron major, i.e. the
// weight from input unit i to output unit o of layer l sits at
// layer_offset(l) + o * in_size(l) + i. There are no bias terms.
using Genome = std::vector<double>;

enum class Activation { ReLU, Tanh };

// Layer sizes of the policy network. The default 16-10-10-4 maps a one-hot
// state over 16 cells to 4 action values and has exactly 300 weights.
class NetworkShape {
public:
    NetworkShape() : NetworkShape({16, 10, 10, 4}) {}

    explicit NetworkShape(std::vector<int> layer_sizes)
        : layer_sizes_(std::move(layer_sizes)) {
        if (layer_sizes_.size() < 2)
            throw ConfigError("network shape needs at least two layers");
        for (int s : layer_sizes_)
            if (s < 1) throw ConfigError("network layer sizes must be >= 1");
        offsets_.push_back(0);
        for (size_t l = 0; l + 1 < layer_sizes_.size(); ++l)
            offsets_.push_back(offsets_.back() + layer_sizes_[l] * layer_sizes_[l + 1]);
    }

    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    int num_layers() const { return static_cast<int>(layer_sizes_.size()); }
    int input_size() const { return layer_sizes_.front(); }
    int output_size() const { return layer_sizes_.back(); }
    int parameter_count() const { return offsets_.back(); }
    int layer_offset(int layer) const { return offsets_[layer]; }
    int max_layer_size() const {
        int m = 0;
        for (int s : layer_sizes_) m = m > s ? m : s;
        return m;
    }

    bool operator==(const NetworkShape& other) const {
        return layer_sizes_ == other.layer_sizes_;
    }

private:
    std::vector<int> layer_sizes_;
    std::vector<int> offsets_; // cumulative weight counts per weight layer
};

// Reusable activation buffers so episode rollouts do not allocate per step.
struct NetWorkspace {
    std::vector<double> a;
    std::vector<double> b;

    explicit NetWorkspace(const NetworkShape& shape)
        : a(shape.max_layer_size()), b(shape.max_layer_size()) {}
};

// Action values for a one-hot input at state_index. Hidden layers apply the
// chosen nonlinearity, the output layer is linear.
std::vector<double> forward(const Genome& genome, const NetworkShape& shape,
                            int state_index, Activation act = Activation::ReLU);

// Same as forward() but writes into ws and returns a pointer to the output
// activations (valid until the next call with the same workspace).
const double* forward_into(const Genome& genome, const NetworkShape& shape,
                           int state_index, NetWorkspace& ws,
                           Activation act = Activation::ReLU);

// Index of the largest action value; ties go to the lowest action index.
int select_action(const Genome& genome, const NetworkShape& shape,
                  int state_index, Activation act = Activation::ReLU);

int select_action(const Genome& genome, const NetworkShape& shape,
                  int state_index, NetWorkspace& ws,
                  Activation act = Activation::ReLU);

} // namespace neuro

#endif
