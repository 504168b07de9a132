#include "ldpq/haar.hpp"

#include <cmath>
#include <stdexcept>

#include "ldpq/density.hpp"
#include "ldpq/errors.hpp"

namespace ldpq {

WaveletIndex CoeffTable::index_of(std::size_t i) {
    if (i == 0) return {-1, 0};
    int j = 0;
    while ((std::size_t{2} << j) <= i) ++j;
    return {j, static_cast<int>(i - (std::size_t{1} << j))};
}

namespace {

void check_index(WaveletIndex idx) {
    if (idx.level < -1) throw InvalidIndex("wavelet level must be >= -1");
    const int kmax = idx.level <= 0 ? 1 : (1 << idx.level);
    if (idx.position < 0 || idx.position >= kmax)
        throw InvalidIndex("wavelet position out of range for level");
}

} // namespace

double eval_wavelet(WaveletIndex idx, double x) {
    check_index(idx);
    if (x < 0.0 || x > 1.0) throw InvalidIndex("x outside [0,1]");
    if (idx.level == -1) return 1.0;
    // Map to the support [k 2^-j, (k+1) 2^-j); x == 1 falls into the last cell.
    double t = std::ldexp(x, idx.level) - idx.position;
    if (t < 0.0 || t > 1.0 || (t == 1.0 && !(x == 1.0 && idx.position == (1 << idx.level) - 1)))
        return 0.0;
    const double amp = std::ldexp(1.0, idx.level / 2) * (idx.level % 2 ? std::sqrt(2.0) : 1.0);
    return t < 0.5 ? amp : -amp;
}

CoeffTable exact_coeffs(const DyadicDensity& d, int J) {
    if (J < 1) throw InvalidConfig("exact_coeffs: J must be >= 1");
    // Mass pyramid: masses per cell at level L, halved resolution upwards.
    const int L = std::max(J, d.resolution());
    std::vector<double> mass(std::size_t{1} << L);
    const std::size_t reps = mass.size() >> d.resolution();
    const double w = 1.0 / static_cast<double>(mass.size());
    for (std::size_t i = 0; i < mass.size(); ++i)
        mass[i] = d.cells()[i / reps] * w;

    CoeffTable table(J);
    for (int lvl = L; lvl > 0; --lvl) {
        const std::size_t half = std::size_t{1} << (lvl - 1);
        if (lvl - 1 < J) {
            // beta_{j,k} = 2^{j/2} (mass of left half - mass of right half)
            const int j = lvl - 1;
            const double amp =
                std::ldexp(1.0, j / 2) * (j % 2 ? std::sqrt(2.0) : 1.0);
            for (std::size_t k = 0; k < half; ++k)
                table.at(j, static_cast<int>(k)) =
                    amp * (mass[2 * k] - mass[2 * k + 1]);
        }
        for (std::size_t k = 0; k < half; ++k)
            mass[k] = mass[2 * k] + mass[2 * k + 1];
    }
    table.at(-1, 0) = mass[0];
    return table;
}

double project_eval(const CoeffTable& c, double x) {
    if (x < 0.0 || x > 1.0) throw InvalidIndex("x outside [0,1]");
    double acc = c.at(-1, 0);
    for (int j = 0; j < c.max_level(); ++j) {
        double scaled = std::ldexp(x, j);
        int k = static_cast<int>(scaled);
        if (k >= (1 << j)) k = (1 << j) - 1; // x == 1
        const double t = scaled - k;
        const double amp =
            std::ldexp(1.0, j / 2) * (j % 2 ? std::sqrt(2.0) : 1.0);
        acc += c.at(j, k) * (t < 0.5 ? amp : -amp);
    }
    return acc;
}

double tail_energy(const DyadicDensity& d, int J) {
    const CoeffTable c = exact_coeffs(d, J);
    double captured = 0.0;
    for (double v : c.values()) captured += v * v;
    return quad_functional(d) - captured;
}

} // namespace ldpq
