#ifndef LDPQ_AUDIT_HPP
#define LDPQ_AUDIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ldpq/channel_ni.hpp"
#include "ldpq/density.hpp"

namespace ldpq {

struct AuditReport {
    std::string channel;
    double alpha;
    double analytic_bound;  // sup log-ratio implied by the proof
    double empirical_max;   // max sampled log-ratio
    std::size_t samples;
    bool pass; // analytic <= alpha and empirical <= alpha + 1e-12

    std::string to_text() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

// Analytic bound plus `trials` sampled triples (x, x', z ~ q(.|x)) with the
// exact closed-form Laplace log-density ratio.
AuditReport audit_ni(const NiConfig& cfg, std::size_t trials, Rng& rng);

// Exact two-point ratio check of the stage-2 randomized response over a
// grid of clamped values; the worst case u = tau, u' = -tau attains e^alpha.
AuditReport audit_rr(double tau, double alpha, std::size_t grid);

struct ConcentrationRow {
    double u;
    double threshold;
    double empirical_tail;
    double bound; // 4 e^{-u/2}
};

// Tail check of |fhat(1/2) - E fhat(1/2)| under a given density against the
// Bernstein-type threshold [c1 J^a 2^J/(alpha sqrt n) sqrt u] v
// [c2 J^a 2^J/(n alpha) u], c1 = 2 sigma + 2 sqrt(e M), c2 = 2 sigma + 1.
std::vector<ConcentrationRow> concentration_check(
    std::size_t n, const NiConfig& cfg, const DyadicDensity& d,
    const std::vector<double>& u_values, std::size_t replications, Rng& rng,
    double sup_bound_M);

} // namespace ldpq

#endif
