#include "neuro/rng.hpp"

#include <cmath>

namespace neuro {

double Rng::next_normal() {
    // u1 in (0, 1] so the log is finite; u2 in [0, 1).
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace neuro
