#ifndef LDPQ_TEST_SUPPORT_HPP
#define LDPQ_TEST_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "ldpq/density.hpp"
#include "ldpq/rng.hpp"

namespace ldpq::test {

// Random dyadic density with positive cells, normalized to mean 1.
inline DyadicDensity random_density(int resolution, Rng& rng) {
    std::vector<double> cells(std::size_t{1} << resolution);
    double sum = 0.0;
    for (auto& v : cells) {
        v = 0.05 + rng.uniform();
        sum += v;
    }
    const double mean = sum / static_cast<double>(cells.size());
    for (auto& v : cells) v /= mean;
    return DyadicDensity(resolution, std::move(cells));
}

struct MeanSe {
    double mean;
    double se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size() - 1);
    return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

} // namespace ldpq::test

#endif
