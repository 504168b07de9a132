#ifndef LDPQ_DENSITY_HPP
#define LDPQ_DENSITY_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ldpq/haar.hpp"
#include "ldpq/rng.hpp"

namespace ldpq {

// Piecewise-constant density on the dyadic grid of 2^R cells of [0,1].
// Cell values are density heights; their mean is 1 and all are >= 0.
class DyadicDensity {
public:
    DyadicDensity(int resolution, std::vector<double> cells);

    // Uniform density at resolution 0.
    static DyadicDensity uniform() { return DyadicDensity(0, {1.0}); }

    int resolution() const { return resolution_; }
    const std::vector<double>& cells() const { return cells_; }
    std::size_t cell_count() const { return cells_.size(); }

    double max_value() const;

    // Text format: first line R, second line 2^R space-separated values.
    void save(std::ostream& os) const;
    static DyadicDensity load(std::istream& is);

private:
    int resolution_;
    std::vector<double> cells_;
};

// Besov-type perturbation of the uniform density: per level m in `levels`,
// weight delta * 2^{-m(s+1/2)} on each of the 2^m coefficients, signs from
// `signs` (concatenated per level) or Rademacher draws from `sign_seed`.
struct BesovSpec {
    double s = 0.5;                // smoothness, in (0,1)
    double delta = 0.5;            // amplitude, > 0
    std::vector<int> levels = {3}; // one entry = the single-level family
    std::vector<int> signs;        // +-1 per coefficient; empty -> use seed
    std::uint64_t sign_seed = 0;
};

// Throws AmplitudeTooLarge (carrying the maximal admissible delta) if the
// perturbation would make some cell negative or push the sup norm above 2.
DyadicDensity make_besov_density(const BesovSpec& spec);

// n i.i.d. draws by inverse-CDF on the cell grid; deterministic given rng.
std::vector<double> sample(const DyadicDensity& d, std::size_t n, Rng& rng);

// D(f) = int f^2 = 2^{-R} sum v^2, exact.
double quad_functional(const DyadicDensity& d);

// int g f, exact, for g a dyadic density or a Haar coefficient table.
double linear_functional(const DyadicDensity& d, const DyadicDensity& g);
double linear_functional(const DyadicDensity& d, const CoeffTable& g);

// Height of the cell containing x (x == 1 belongs to the last cell).
double eval_density(const DyadicDensity& d, double x);

} // namespace ldpq

#endif
