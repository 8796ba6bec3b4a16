#include <doctest.h>

#include <cmath>

#include "neuro/net.hpp"
#include "neuro/rng.hpp"
#include "oracles.hpp"

using namespace neuro;

namespace {

Genome random_genome(const NetworkShape& shape, uint64_t seed) {
    Rng rng(seed);
    Genome g(shape.parameter_count());
    for (double& w : g) w = rng.next_normal();
    return g;
}

std::vector<double> one_hot(int n, int idx) {
    std::vector<double> v(n, 0.0);
    v[idx] = 1.0;
    return v;
}

} // namespace

TEST_CASE("default shape has 300 parameters") {
    NetworkShape shape;
    CHECK(shape.layer_sizes() == std::vector<int>{16, 10, 10, 4});
    CHECK(shape.parameter_count() == 300);
    CHECK(shape.output_size() == 4);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(NetworkShape({16}), ConfigError);
    CHECK_THROWS_AS(NetworkShape({16, 0, 4}), ConfigError);
    CHECK_NOTHROW(NetworkShape({2, 1}));
}

TEST_CASE("all-zero genome maps every state to zeros") {
    NetworkShape shape;
    Genome zeros(shape.parameter_count(), 0.0);
    for (int s = 0; s < 16; ++s) {
        std::vector<double> out = forward(zeros, shape, s);
        for (double v : out) CHECK(v == 0.0);
        CHECK(select_action(zeros, shape, s) == 0); // four-way tie, lowest index
    }
}

TEST_CASE("a single wired path carries a one through the network") {
    NetworkShape shape;
    Genome g(shape.parameter_count(), 0.0);
    // input 0 -> hidden0 unit 2 -> hidden1 unit 5 -> action 3
    g[shape.layer_offset(0) + 2 * 16 + 0] = 1.0;
    g[shape.layer_offset(1) + 5 * 10 + 2] = 1.0;
    g[shape.layer_offset(2) + 3 * 10 + 5] = 1.0;

    std::vector<double> out = forward(g, shape, 0);
    for (int a = 0; a < 4; ++a) CHECK(out[a] == (a == 3 ? 1.0 : 0.0));
    CHECK(select_action(g, shape, 0) == 3);

    // Any other state sees an all-zero network.
    std::vector<double> other = forward(g, shape, 5);
    for (double v : other) CHECK(v == 0.0);
}

TEST_CASE("forward agrees with the dense matrix oracle") {
    NetworkShape shape;
    Genome g = random_genome(shape, 123);
    for (int s : {0, 5, 15}) {
        std::vector<double> got = forward(g, shape, s);
        std::vector<double> want = oracles::dense_forward(g, shape, one_hot(16, s));
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - want[i]) < 1e-9);
    }

    // Same check under tanh.
    for (int s : {1, 7}) {
        std::vector<double> got = forward(g, shape, s, Activation::Tanh);
        std::vector<double> want = oracles::dense_forward(g, shape, one_hot(16, s), true);
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - want[i]) < 1e-9);
    }
}

TEST_CASE("select_action follows the oracle argmax on seeded genomes") {
    NetworkShape shape;
    Genome g = random_genome(shape, 2024);
    std::vector<double> out = oracles::dense_forward(g, shape, one_hot(16, 5));
    int want = 0;
    for (int a = 1; a < 4; ++a)
        if (out[a] > out[want]) want = a;
    CHECK(select_action(g, shape, 5) == want);
}

TEST_CASE("argmax ties break toward the lower action index") {
    // Build outputs [0.1, 3, -2, 3] from a tiny two-layer net: weights on
    // the last layer are the outputs themselves for a pass-through hidden.
    NetworkShape shape({2, 4});
    Genome g = {0.1, 0.0, 3.0, 0.0, -2.0, 0.0, 3.0, 0.0};
    std::vector<double> out = forward(g, shape, 0);
    CHECK(out == std::vector<double>{0.1, 3.0, -2.0, 3.0});
    CHECK(select_action(g, shape, 0) == 1);
}

TEST_CASE("scaling the last layer never changes the selected action") {
    NetworkShape shape;
    for (uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
        Genome g = random_genome(shape, seed);
        Genome scaled = g;
        for (int i = shape.layer_offset(2); i < shape.parameter_count(); ++i)
            scaled[i] *= 4.75;
        for (int s = 0; s < 16; ++s)
            CHECK(select_action(g, shape, s) == select_action(scaled, shape, s));
    }
}

TEST_CASE("zeroing a weight equals removing the edge in the oracle") {
    NetworkShape shape;
    Genome g = random_genome(shape, 77);
    Genome cut = g;
    const int target = shape.layer_offset(1) + 3 * 10 + 4; // hidden edge 4->3
    cut[target] = 0.0;

    Genome oracle_weights = g;
    oracle_weights[target] = 0.0;
    for (int s = 0; s < 16; ++s) {
        std::vector<double> got = forward(cut, shape, s);
        std::vector<double> want =
            oracles::dense_forward(oracle_weights, shape, one_hot(16, s));
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(std::fabs(got[i] - want[i]) < 1e-9);
    }
}

TEST_CASE("forward is pure") {
    NetworkShape shape;
    Genome g = random_genome(shape, 55);
    std::vector<double> first = forward(g, shape, 9);
    for (int i = 0; i < 10; ++i) CHECK(forward(g, shape, 9) == first);
}

TEST_CASE("input errors") {
    NetworkShape shape;
    Genome g(shape.parameter_count(), 0.0);
    CHECK_THROWS_AS(forward(g, shape, -1), InputError);
    CHECK_THROWS_AS(forward(g, shape, 16), InputError);
    Genome bad(299, 0.0);
    CHECK_THROWS_AS(forward(bad, shape, 0), ShapeError);
    CHECK_THROWS_AS(select_action(bad, shape, 0), ShapeError);
}
