#include "ldpq/density.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ldpq/errors.hpp"

namespace ldpq {

DyadicDensity::DyadicDensity(int resolution, std::vector<double> cells)
    : resolution_(resolution), cells_(std::move(cells)) {
    if (resolution_ < 0) throw InvalidConfig("resolution must be >= 0");
    if (cells_.size() != (std::size_t{1} << resolution_))
        throw InvalidConfig("cell count must be 2^resolution");
    double sum = 0.0;
    for (double v : cells_) {
        if (!(v >= 0.0)) throw InvalidConfig("density cells must be >= 0");
        sum += v;
    }
    const double mean = sum / static_cast<double>(cells_.size());
    if (std::fabs(mean - 1.0) > 1e-9)
        throw InvalidConfig("density must integrate to 1 (cell mean 1)");
}

double DyadicDensity::max_value() const {
    return *std::max_element(cells_.begin(), cells_.end());
}

void DyadicDensity::save(std::ostream& os) const {
    os << resolution_ << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < cells_.size(); ++i)
        os << (i ? " " : "") << cells_[i];
    os << '\n';
}

DyadicDensity DyadicDensity::load(std::istream& is) {
    int r = 0;
    if (!(is >> r)) throw InvalidConfig("density file: missing resolution");
    std::vector<double> cells(std::size_t{1} << r);
    for (auto& v : cells)
        if (!(is >> v)) throw InvalidConfig("density file: missing cell value");
    return DyadicDensity(r, std::move(cells));
}

DyadicDensity make_besov_density(const BesovSpec& spec) {
    if (!(spec.s > 0.0 && spec.s <= 1.0))
        throw InvalidConfig("besov spec: s must lie in (0,1]");
    if (!(spec.delta >= 0.0)) throw InvalidConfig("besov spec: delta must be >= 0");
    if (spec.levels.empty()) throw InvalidConfig("besov spec: no levels");
    int top = 0;
    std::size_t n_signs = 0;
    for (int m : spec.levels) {
        if (m < 1) throw InvalidConfig("besov spec: levels must be >= 1");
        top = std::max(top, m);
        n_signs += std::size_t{1} << m;
    }
    std::vector<int> signs = spec.signs;
    if (signs.empty()) {
        Rng rng(spec.sign_seed);
        signs.resize(n_signs);
        for (auto& s : signs) s = rng.bernoulli(0.5) ? 1 : -1;
    } else if (signs.size() != n_signs) {
        throw InvalidConfig("besov spec: sign vector length mismatch");
    }

    const int R = top + 1;
    const std::size_t ncells = std::size_t{1} << R;
    // g(x) = sum_m 2^{-m(s+1/2)} sum_k nu_k psi_{mk}(x): the perturbation per
    // unit delta, exact on each cell of the resolution-R grid.
    std::vector<double> g(ncells, 0.0);
    std::size_t sign_off = 0;
    for (int m : spec.levels) {
        const double w = std::pow(2.0, -m * (spec.s + 0.5));
        const double amp = std::pow(2.0, 0.5 * m); // |psi_{mk}| on its support
        const std::size_t cells_per_half = ncells >> (m + 1);
        for (int k = 0; k < (1 << m); ++k) {
            const double v = w * amp * signs[sign_off + k];
            const std::size_t base = 2 * cells_per_half * k;
            for (std::size_t c = 0; c < cells_per_half; ++c) {
                g[base + c] += v;
                g[base + cells_per_half + c] -= v;
            }
        }
        sign_off += std::size_t{1} << m;
    }

    const double worst = std::max(
        -*std::min_element(g.begin(), g.end()),
        *std::max_element(g.begin(), g.end()));
    // Non-negativity and the sup-norm cap ||f||_inf <= 2 bind at the same
    // amplitude for symmetric sign patterns.
    if (spec.delta * worst > 1.0 + 1e-12) {
        const double max_delta = 1.0 / worst;
        std::ostringstream msg;
        msg << "besov amplitude too large: delta = " << spec.delta
            << ", maximal admissible delta = " << max_delta;
        throw AmplitudeTooLarge(msg.str(), max_delta);
    }

    std::vector<double> cells(ncells);
    for (std::size_t i = 0; i < ncells; ++i) cells[i] = 1.0 + spec.delta * g[i];
    return DyadicDensity(R, std::move(cells));
}

std::vector<double> sample(const DyadicDensity& d, std::size_t n, Rng& rng) {
    if (n < 1) throw InvalidConfig("sample: n must be >= 1");
    const std::size_t ncells = d.cell_count();
    std::vector<double> cum(ncells);
    double acc = 0.0;
    const double w = 1.0 / static_cast<double>(ncells);
    for (std::size_t i = 0; i < ncells; ++i) {
        acc += d.cells()[i] * w;
        cum[i] = acc;
    }
    cum.back() = 1.0; // guard against rounding at the top

    std::vector<double> out(n);
    for (auto& x : out) {
        const double u = rng.uniform();
        const std::size_t c =
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
        const double lo = c == 0 ? 0.0 : cum[c - 1];
        const double mass = cum[c] - lo;
        const double frac = mass > 0.0 ? (u - lo) / mass : 0.0;
        x = (static_cast<double>(c) + frac) * w;
    }
    return out;
}

double quad_functional(const DyadicDensity& d) {
    double acc = 0.0;
    for (double v : d.cells()) acc += v * v;
    return acc / static_cast<double>(d.cell_count());
}

double linear_functional(const DyadicDensity& d, const DyadicDensity& g) {
    const int R = std::max(d.resolution(), g.resolution());
    const std::size_t ncells = std::size_t{1} << R;
    const std::size_t rd = ncells >> d.resolution();
    const std::size_t rg = ncells >> g.resolution();
    double acc = 0.0;
    for (std::size_t i = 0; i < ncells; ++i)
        acc += d.cells()[i / rd] * g.cells()[i / rg];
    return acc / static_cast<double>(ncells);
}

double linear_functional(const DyadicDensity& d, const CoeffTable& g) {
    // <g, f> = sum beta_{jk} <psi_{jk}, f>: pair against the exact table of d.
    const CoeffTable fd = exact_coeffs(d, g.max_level());
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * fd[i];
    return acc;
}

double eval_density(const DyadicDensity& d, double x) {
    if (x < 0.0 || x > 1.0) throw InvalidConfig("eval_density: x outside [0,1]");
    std::size_t c = static_cast<std::size_t>(
        std::ldexp(x, d.resolution()));
    if (c >= d.cell_count()) c = d.cell_count() - 1;
    return d.cells()[c];
}

} // namespace ldpq
