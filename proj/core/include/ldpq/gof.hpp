#ifndef LDPQ_GOF_HPP
#define LDPQ_GOF_HPP

#include <span>
#include <vector>

#include "ldpq/channel_ni.hpp"
#include "ldpq/channel_si.hpp"
#include "ldpq/density.hpp"
#include "ldpq/rng.hpp"

namespace ldpq {

enum class Protocol { NI, SI };

struct GofConfig {
    Protocol protocol = Protocol::NI;
    DyadicDensity null_density = DyadicDensity::uniform();
    double C = 1.0;      // threshold constant (calibrate_gof_constant)
    double gamma = 0.05; // target level
    double s_eff = 0.5;
    double a = 2.0;
    double alpha = 1.0;
    std::size_t n = 1024;
    double K = 2.0;
    double M = 2.0;
    void validate() const;
};

struct TestOutcome {
    int decision;     // 1 iff statistic > threshold
    double statistic;
    double threshold;
};

// t_n^{(NI)} = (n a^2)^{-2s'/(4s'+3)} ln^{a+1/4}(n a^2);
// t_n^{(SI)} = (n a^2)^{-2s'/(4s'+2)} ln^{a/2+1/4}(n a^2).
// Requires n alpha^2 > e.
double gof_threshold(const GofConfig& cfg);

// Distance statistic only (no thresholding); exposed for calibration.
double gof_statistic_ni(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng);
double gof_statistic_si(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng);

// NI test: sanitize, center each record by the known coefficients of f0,
// U-statistic -> estimate of ||f - f0||^2 truncated at J; reject above
// C t_n. SI test: stage 1 estimates g = fhat - P_J f0, stage 2 responds to
// clamp(g(x)); the exact correction int g f0 is subtracted.
TestOutcome gof_test_ni(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng);
TestOutcome gof_test_si(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng);

// Monte Carlo calibration under H0 (f = f0): C such that the empirical
// rejection rate equals gamma, i.e. the (1-gamma) quantile of
// statistic / t_n over `replications` runs.
double calibrate_gof_constant(const GofConfig& cfg, std::size_t replications,
                              std::uint64_t seed);

} // namespace ldpq

#endif
