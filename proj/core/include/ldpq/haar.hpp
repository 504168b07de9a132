#ifndef LDPQ_HAAR_HPP
#define LDPQ_HAAR_HPP

#include <cstddef>
#include <vector>

namespace ldpq {

class DyadicDensity;

// Index into the Haar basis of L2[0,1]. Level -1 is the constant scaling
// function phi == 1; level j >= 0 holds 2^j translates of the mother wavelet
// scaled by 2^{j/2}. Sign convention: +1 on the left half of the support.
struct WaveletIndex {
    int level;    // j >= -1
    int position; // 0 <= k < max(1, 2^j)
};

// Ragged table of Haar coefficients for levels -1 .. max_level-1, stored
// flat: level -1 at slot 0, level j >= 0 occupying slots [2^j, 2^{j+1}).
// Total size is 2^max_level.
class CoeffTable {
public:
    explicit CoeffTable(int max_level)
        : max_level_(max_level), values_(std::size_t{1} << max_level, 0.0) {}

    int max_level() const { return max_level_; }
    std::size_t size() const { return values_.size(); }

    double& at(int j, int k) { return values_[slot(j, k)]; }
    double at(int j, int k) const { return values_[slot(j, k)]; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Flat slot of (j, k); level -1 maps to 0.
    static std::size_t slot(int j, int k) {
        return j < 0 ? 0 : (std::size_t{1} << j) + static_cast<std::size_t>(k);
    }
    // Inverse of slot(): the index stored at flat position i.
    static WaveletIndex index_of(std::size_t i);

private:
    int max_level_;
    std::vector<double> values_;
};

// psi_{jk}(x) for x in [0,1]. x == 1 is treated as belonging to the last
// dyadic cell. Throws InvalidIndex for out-of-range (j, k).
double eval_wavelet(WaveletIndex idx, double x);

// Exact coefficients <f, psi_{jk}> of a dyadic density for levels < J,
// computed by a mass pyramid over dyadic cells (no quadrature error).
CoeffTable exact_coeffs(const DyadicDensity& d, int J);

// Partial-sum evaluation sum_{j,k} beta_{jk} psi_{jk}(x); O(max_level).
double project_eval(const CoeffTable& c, double x);

// D(d) - sum_{j < J, k} beta_{jk}^2: the energy of d above level J-1,
// i.e. the squared bias of the truncated quadratic-functional estimate.
double tail_energy(const DyadicDensity& d, int J);

} // namespace ldpq

#endif
