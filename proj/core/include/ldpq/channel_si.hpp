#ifndef LDPQ_CHANNEL_SI_HPP
#define LDPQ_CHANNEL_SI_HPP

#include <vector>

#include "ldpq/channel_ni.hpp"
#include "ldpq/haar.hpp"
#include "ldpq/rng.hpp"

namespace ldpq {

struct SiConfig {
    double alpha = 1.0;
    double a = 2.0;
    int J = 1;
    double tau = 1.0;  // clamp; must satisfy tau >= 2M and tau^2 >= 1
    double K = 2.0;    // tuning constant, >= 2
    double M = 2.0;    // sup-norm bound on the densities in play
    double s_eff = 0.5;
    SigmaVariant variant = SigmaVariant::normalized;
    double stage1_noise_scale = 1.0; // test hook

    NiConfig stage1_config() const;
    // Magnitude of a stage-2 response: tau (e^alpha + 1)/(e^alpha - 1).
    double response_magnitude() const;
    void validate() const;
};

// Stage-1 private density estimate: coefficient-wise mean of the sanitized
// arrays; the function itself is project_eval of the table.
struct Stage1Estimate {
    CoeffTable coeffs;
    double operator()(double x) const { return project_eval(coeffs, x); }
};

Stage1Estimate stage1_estimate(const std::vector<NiRecord>& records);

// (tau ^ y) v (-tau): projection onto [-tau, tau].
double clamp(double y, double tau);

// tau^2 = [K^2 M^2 (1 v J^{2a+1} 2^{J(1 - 2(s' ^ 1/2))})] v 1.
double select_tau(double K, double M, int J, double a, double s_eff);

// 2^J = (n alpha^2)^{1/(2(s' ^ 1) + 1)}, rounded and clamped as in NI.
int select_J_si(std::size_t n, double alpha, double s_eff);

// One +-c randomized response with conditional mean clamp(fhat(x), tau).
struct Stage2Record {
    double value; // +-c exactly
};

Stage2Record stage2_sanitize(double x, const Stage1Estimate& fhat, double tau,
                             double alpha, Rng& rng);

// Sample mean of the stage-2 responses.
double estimate_quadratic_si(const std::vector<Stage2Record>& records);

// Full two-stage protocol on an even-sized sample: first half through the
// non-interactive channel into fhat, second half through clamped randomized
// response. The only cross-individual flow is Z^(1) -> stage 2.
double run_si_protocol(const std::vector<double>& sample_points,
                       const SiConfig& cfg, Rng& rng);

} // namespace ldpq

#endif
