#ifndef LDPQ_CHANNEL_NI_HPP
#define LDPQ_CHANNEL_NI_HPP

#include <vector>

#include "ldpq/haar.hpp"
#include "ldpq/rng.hpp"

namespace ldpq {

// Which normalization constant sigma the channel uses. The amplitude-1 Haar
// basis has per-level sensitivity up to 4, so certifying alpha-DP needs
// sigma = 4 + 4 sum j^{-a}; the smaller constant 4 + 2 sum j^{-a} certifies
// only the half-amplitude basis and is kept for comparison.
enum class SigmaVariant { normalized, paper };

// sum_{j>=1} j^{-a} + 4, resp. doubled series; absolute error <= 1e-10
// (partial sum plus a midpoint-rule tail estimate). Throws InvalidConfig
// for a <= 1.
double sigma_constant(double a, SigmaVariant variant);

struct NiConfig {
    double alpha = 1.0;   // privacy budget, in (0, 1]
    double a = 2.0;       // noise level exponent, > 1
    int J = 1;            // resolution: coefficients for levels -1 .. J-1
    SigmaVariant variant = SigmaVariant::normalized;
    // Test hooks; never set by CLI-reachable paths.
    double noise_scale = 1.0;       // 0 turns the channel into the identity
    bool noise_on_scaling = true;   // false zeroes the level -1 noise

    double sigma() const { return sigma_constant(a, variant); }
    // sigma_j: 1 at level -1, (1 v j)^a 2^{j/2} at level j >= 0.
    static double level_scale(int j, double a);
    void validate() const;
};

// One individual's sanitized output: a coefficient-shaped array of
// Z_{jk} = psi_{jk}(x) + sigma_j (sigma/alpha) W_{jk} with W ~ Laplace.
using NiRecord = CoeffTable;

NiRecord sanitize_ni(double x, const NiConfig& cfg, Rng& rng);

// Allocation-free variant for hot loops; `out` must already have level cfg.J.
void sanitize_ni_into(double x, const NiConfig& cfg, Rng& rng, NiRecord& out);

// Resolution rule: 2^J = (n a^2)^{2/(4s'+3)} for s' <= 3/4 and
// (n a^2 / (ln n a^2)^{4a+1})^{1/3} above; rounded, clamped to [1, 24].
// Throws InsufficientBudget when n alpha^2 <= 1.
int select_J_ni(std::size_t n, double alpha, double s_eff, double a);

// U-statistic (1/(n(n-1))) sum_{i != h} <Z_i, Z_h>, computed in O(n 2^J)
// via sum_{i != h} z_i z_h = (sum z_i)^2 - sum z_i^2. Throws SampleTooSmall
// for n < 2.
double estimate_quadratic_ni(const std::vector<NiRecord>& records);

// Exact worst-case bound on sup log q(z|x)/q(z|x') from the telescoped
// per-level sensitivities: (alpha/sigma) sum_{j=0}^{J-1} 4 (1 v j)^{-a}.
// <= alpha by construction when cfg.variant == normalized.
double ni_logratio_bound(const NiConfig& cfg);

// Closed-form log q(z|x) - log q(z|x') for a concrete record; the sampled
// counterpart of ni_logratio_bound, used by the privacy audit.
double ni_logratio(const NiRecord& z, double x, double x_prime,
                   const NiConfig& cfg);

} // namespace ldpq

#endif
