#include "neuro/net.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace neuro {

namespace {

void check_inputs(const Genome& genome, const NetworkShape& shape, int state_index) {
    if (static_cast<int>(genome.size()) != shape.parameter_count())
        throw ShapeError("genome has " + std::to_string(genome.size()) +
                         " weights, shape expects " +
                         std::to_string(shape.parameter_count()));
    if (state_index < 0 || state_index >= shape.input_size())
        throw InputError("state index " + std::to_string(state_index) +
                         " outside [0, " + std::to_string(shape.input_size()) + ")");
}

} // namespace

const double* forward_into(const Genome& genome, const NetworkShape& shape,
                           int state_index, NetWorkspace& ws, Activation act) {
    check_inputs(genome, shape, state_index);

    const std::vector<int>& sizes = shape.layer_sizes();
    const int num_weight_layers = shape.num_layers() - 1;

    // One-hot input: the first hidden pre-activation is just the
    // state_index-th column of the first weight layer.
    double* cur = ws.a.data();
    double* nxt = ws.b.data();
    {
        const double* w = genome.data() + shape.layer_offset(0);
        const int in = sizes[0], out = sizes[1];
        const bool hidden = num_weight_layers > 1;
        for (int o = 0; o < out; ++o) {
            double v = w[o * in + state_index];
            if (hidden) v = (act == Activation::ReLU) ? (v > 0.0 ? v : 0.0)
                                                      : std::tanh(v);
            cur[o] = v;
        }
    }

    for (int l = 1; l < num_weight_layers; ++l) {
        const double* w = genome.data() + shape.layer_offset(l);
        const int in = sizes[l], out = sizes[l + 1];
        const bool hidden = l + 1 < shape.num_layers() - 1;
        for (int o = 0; o < out; ++o) {
            const double* row = w + o * in;
            double v = 0.0;
            for (int i = 0; i < in; ++i) v += row[i] * cur[i];
            if (hidden) v = (act == Activation::ReLU) ? (v > 0.0 ? v : 0.0)
                                                      : std::tanh(v);
            nxt[o] = v;
        }
        std::swap(cur, nxt);
    }
    return cur;
}

std::vector<double> forward(const Genome& genome, const NetworkShape& shape,
                            int state_index, Activation act) {
    NetWorkspace ws(shape);
    const double* out = forward_into(genome, shape, state_index, ws, act);
    return std::vector<double>(out, out + shape.output_size());
}

int select_action(const Genome& genome, const NetworkShape& shape,
                  int state_index, NetWorkspace& ws, Activation act) {
    const double* out = forward_into(genome, shape, state_index, ws, act);
    int best = 0;
    for (int a = 1; a < shape.output_size(); ++a)
        if (out[a] > out[best]) best = a;
    return best;
}

int select_action(const Genome& genome, const NetworkShape& shape,
                  int state_index, Activation act) {
    NetWorkspace ws(shape);
    return select_action(genome, shape, state_index, ws, act);
}

} // namespace neuro
