#include "ldpq/channel_si.hpp"

#include <cassert>
#include <cmath>

#include "ldpq/errors.hpp"

namespace ldpq {

NiConfig SiConfig::stage1_config() const {
    NiConfig cfg;
    cfg.alpha = alpha;
    cfg.a = a;
    cfg.J = J;
    cfg.variant = variant;
    cfg.noise_scale = stage1_noise_scale;
    return cfg;
}

double SiConfig::response_magnitude() const {
    const double e = std::exp(alpha);
    return tau * (e + 1.0) / (e - 1.0);
}

void SiConfig::validate() const {
    stage1_config().validate();
    if (!(tau > 0.0)) throw InvalidConfig("SiConfig: tau must be > 0");
    if (!(tau * tau >= 1.0 - 1e-12)) throw InvalidConfig("SiConfig: tau^2 must be >= 1");
    if (!(K >= 2.0)) throw InvalidConfig("SiConfig: K must be >= 2");
    if (!(M > 0.0)) throw InvalidConfig("SiConfig: M must be > 0");
}

Stage1Estimate stage1_estimate(const std::vector<NiRecord>& records) {
    if (records.empty())
        throw SampleTooSmall("stage1_estimate: no records");
    CoeffTable mean(records.front().max_level());
    for (const auto& r : records) {
        if (r.size() != mean.size())
            throw InvalidConfig("stage1_estimate: record shape mismatch");
        for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += r[i];
    }
    const double inv = 1.0 / static_cast<double>(records.size());
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] *= inv;
    return Stage1Estimate{std::move(mean)};
}

double clamp(double y, double tau) {
    return std::max(-tau, std::min(tau, y));
}

double select_tau(double K, double M, int J, double a, double s_eff) {
    if (!(K >= 2.0)) throw InvalidConfig("select_tau: K must be >= 2");
    if (!(M > 0.0)) throw InvalidConfig("select_tau: M must be > 0");
    const double sc = std::min(s_eff, 0.5);
    const double level_factor =
        std::pow(static_cast<double>(J), 2.0 * a + 1.0) *
        std::pow(2.0, J * (1.0 - 2.0 * sc));
    const double tau2 =
        std::max(K * K * M * M * std::max(1.0, level_factor), 1.0);
    return std::sqrt(tau2);
}

int select_J_si(std::size_t n, double alpha, double s_eff) {
    const double budget = static_cast<double>(n) * alpha * alpha;
    if (!(budget > 1.0))
        throw InsufficientBudget("select_J_si: n alpha^2 must exceed 1");
    const double log2_twoJ =
        std::log2(budget) / (2.0 * std::min(s_eff, 1.0) + 1.0);
    int J = static_cast<int>(std::lround(log2_twoJ));
    if (J < 1) J = 1;
    if (J > 24) J = 24;
    return J;
}

Stage2Record stage2_sanitize(double x, const Stage1Estimate& fhat, double tau,
                             double alpha, Rng& rng) {
    if (!(tau > 0.0) || !(alpha > 0.0))
        throw InvalidConfig("stage2_sanitize: tau and alpha must be > 0");
    const double e = std::exp(alpha);
    const double c = tau * (e + 1.0) / (e - 1.0);
    const double u = clamp(fhat(x), tau);
    const double p_head = 0.5 * (1.0 + u / c);
    assert(p_head >= 0.0 && p_head <= 1.0);
    return Stage2Record{rng.bernoulli(p_head) ? c : -c};
}

double estimate_quadratic_si(const std::vector<Stage2Record>& records) {
    if (records.empty())
        throw SampleTooSmall("estimate_quadratic_si: no records");
    double acc = 0.0;
    for (const auto& r : records) acc += r.value;
    return acc / static_cast<double>(records.size());
}

double run_si_protocol(const std::vector<double>& sample_points,
                       const SiConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::size_t total = sample_points.size();
    if (total < 4 || total % 2 != 0)
        throw SampleTooSmall("run_si_protocol: need an even sample of >= 4");
    const std::size_t half = total / 2;

    // Stage 1 accumulates the coefficient mean record by record; the full
    // transcript is never materialized.
    const NiConfig stage1_cfg = cfg.stage1_config();
    CoeffTable mean(cfg.J);
    for (std::size_t i = 0; i < half; ++i) {
        const NiRecord z = sanitize_ni(sample_points[i], stage1_cfg, rng);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += z[c];
    }
    const double inv = 1.0 / static_cast<double>(half);
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] *= inv;
    const Stage1Estimate fhat{std::move(mean)};

    std::vector<Stage2Record> stage2;
    stage2.reserve(half);
    for (std::size_t i = half; i < total; ++i)
        stage2.push_back(
            stage2_sanitize(sample_points[i], fhat, cfg.tau, cfg.alpha, rng));
    return estimate_quadratic_si(stage2);
}

} // namespace ldpq
