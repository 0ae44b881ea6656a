#include "filtercast/rng.hpp"

#include <cmath>
#include <numbers>

namespace filtercast {

double Rng::normal(double mean, double stddev) {
    double u1 = uniform();
    const double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::poisson_small(double lambda) {
    const double limit = std::exp(-lambda);
    std::int64_t k = 0;
    double prod = 1.0;
    do {
        ++k;
        prod *= uniform();
    } while (prod > limit);
    return k - 1;
}

}  // namespace filtercast
