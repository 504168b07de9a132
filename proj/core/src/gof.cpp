#include "ldpq/gof.hpp"

#include <algorithm>
#include <cmath>

#include "ldpq/errors.hpp"

namespace ldpq {

void GofConfig::validate() const {
    if (!(C > 0.0)) throw InvalidConfig("GofConfig: C must be > 0");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidConfig("GofConfig: gamma must lie in (0,1)");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidConfig("GofConfig: alpha must lie in (0,1]");
    if (!(a > 1.0)) throw InvalidConfig("GofConfig: a must be > 1");
}

double gof_threshold(const GofConfig& cfg) {
    cfg.validate();
    const double budget =
        static_cast<double>(cfg.n) * cfg.alpha * cfg.alpha;
    if (!(budget > std::exp(1.0)))
        throw InsufficientBudget("gof_threshold: n alpha^2 must exceed e");
    const double lg = std::log(budget);
    if (cfg.protocol == Protocol::NI)
        return std::pow(budget, -2.0 * cfg.s_eff / (4.0 * cfg.s_eff + 3.0)) *
               std::pow(lg, cfg.a + 0.25);
    return std::pow(budget, -2.0 * cfg.s_eff / (4.0 * cfg.s_eff + 2.0)) *
           std::pow(lg, cfg.a / 2.0 + 0.25);
}

double gof_statistic_ni(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng) {
    cfg.validate();
    const std::size_t n = points.size();
    if (n < 2) throw SampleTooSmall("gof_statistic_ni: need >= 2 points");
    NiConfig ni;
    ni.alpha = cfg.alpha;
    ni.a = cfg.a;
    ni.J = select_J_ni(n, cfg.alpha, cfg.s_eff, cfg.a);
    const CoeffTable beta0 = exact_coeffs(cfg.null_density, ni.J);

    // Centered U-statistic, streamed: (sum^2 - sum of squares) per slot.
    const std::size_t width = beta0.size();
    std::vector<double> sum(width, 0.0), sumsq(width, 0.0);
    NiRecord z(ni.J);
    for (double x : points) {
        sanitize_ni_into(x, ni, rng, z);
        for (std::size_t c = 0; c < width; ++c) {
            const double centered = z[c] - beta0[c];
            sum[c] += centered;
            sumsq[c] += centered * centered;
        }
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < width; ++c) acc += sum[c] * sum[c] - sumsq[c];
    return acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double gof_statistic_si(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng) {
    cfg.validate();
    const std::size_t n = points.size();
    if (n < 4 || n % 2 != 0)
        throw SampleTooSmall("gof_statistic_si: need an even sample of >= 4");
    const std::size_t half = n / 2;

    SiConfig si;
    si.alpha = cfg.alpha;
    si.a = cfg.a;
    si.s_eff = cfg.s_eff;
    si.K = cfg.K;
    si.M = cfg.M;
    si.J = select_J_si(half, cfg.alpha, cfg.s_eff);
    si.tau = select_tau(cfg.K, cfg.M, si.J, cfg.a, cfg.s_eff);

    const NiConfig stage1_cfg = si.stage1_config();
    CoeffTable ghat(si.J);
    NiRecord z(si.J);
    for (std::size_t i = 0; i < half; ++i) {
        sanitize_ni_into(points[i], stage1_cfg, rng, z);
        for (std::size_t c = 0; c < ghat.size(); ++c) ghat[c] += z[c];
    }
    const CoeffTable beta0 = exact_coeffs(cfg.null_density, si.J);
    for (std::size_t c = 0; c < ghat.size(); ++c)
        ghat[c] = ghat[c] / static_cast<double>(half) - beta0[c];
    const Stage1Estimate g{std::move(ghat)};

    std::vector<Stage2Record> responses;
    responses.reserve(half);
    for (std::size_t i = half; i < n; ++i)
        responses.push_back(stage2_sanitize(points[i], g, si.tau, si.alpha, rng));
    const double mean = estimate_quadratic_si(responses);

    // Exact correction int g f0 = sum g_{jk} beta0_{jk}.
    double correction = 0.0;
    for (std::size_t c = 0; c < g.coeffs.size(); ++c)
        correction += g.coeffs[c] * beta0[c];
    return mean - correction;
}

namespace {

TestOutcome decide(double statistic, double threshold) {
    return TestOutcome{statistic > threshold ? 1 : 0, statistic, threshold};
}

} // namespace

TestOutcome gof_test_ni(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng) {
    return decide(gof_statistic_ni(points, cfg, rng),
                  cfg.C * gof_threshold(cfg));
}

TestOutcome gof_test_si(std::span<const double> points, const GofConfig& cfg,
                        Rng& rng) {
    return decide(gof_statistic_si(points, cfg, rng),
                  cfg.C * gof_threshold(cfg));
}

double calibrate_gof_constant(const GofConfig& cfg, std::size_t replications,
                              std::uint64_t seed) {
    if (replications < 20)
        throw InvalidConfig("calibrate_gof_constant: too few replications");
    const double t_n = gof_threshold(cfg);
    std::vector<double> scaled(replications);
    for (std::size_t r = 0; r < replications; ++r) {
        Rng rng = Rng::derive(seed, 0xca1, r);
        const std::vector<double> points =
            sample(cfg.null_density, cfg.n, rng);
        const double stat = cfg.protocol == Protocol::NI
                                ? gof_statistic_ni(points, cfg, rng)
                                : gof_statistic_si(points, cfg, rng);
        scaled[r] = stat / t_n;
    }
    std::sort(scaled.begin(), scaled.end());
    // (1-gamma) empirical quantile of statistic / t_n.
    std::size_t k = static_cast<std::size_t>(
        std::ceil((1.0 - cfg.gamma) * static_cast<double>(replications)));
    k = std::min(std::max<std::size_t>(k, 1), replications);
    return scaled[k - 1];
}

} // namespace ldpq
