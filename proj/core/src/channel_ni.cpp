#include "ldpq/channel_ni.hpp"

#include <cmath>
#include <mutex>
#include <utility>
#include <vector>

#include "ldpq/errors.hpp"

namespace ldpq {

double sigma_constant(double a, SigmaVariant variant) {
    if (!(a > 1.0))
        throw InvalidConfig("sigma_constant: series diverges for a <= 1");
    // Memoized: channels query sigma per sanitized record.
    struct Key {
        double a;
        SigmaVariant v;
        bool operator==(const Key&) const = default;
    };
    static std::mutex mtx;
    static std::vector<std::pair<Key, double>> cache;
    const Key key{a, variant};
    {
        std::lock_guard lock(mtx);
        for (const auto& [k, v] : cache)
            if (k == key) return v;
    }
    // Partial sum of sum_{j>=1} j^{-a}; the tail is the midpoint-rule
    // estimate (N+1/2)^{1-a}/(a-1), whose error is O(N^{-a-1}) and far below
    // the 1e-10 budget at N = 2e5.
    const int N = 200000;
    double s = 0.0;
    for (int j = N; j >= 1; --j) s += std::pow(static_cast<double>(j), -a);
    s += std::pow(N + 0.5, 1.0 - a) / (a - 1.0);
    const double mult = variant == SigmaVariant::normalized ? 4.0 : 2.0;
    const double result = 4.0 + mult * s;
    std::lock_guard lock(mtx);
    cache.emplace_back(key, result);
    return result;
}

double NiConfig::level_scale(int j, double a) {
    if (j < 0) return 1.0;
    const double base = j < 1 ? 1.0 : static_cast<double>(j);
    return std::pow(base, a) * std::ldexp(1.0, j / 2) *
           (j % 2 ? std::sqrt(2.0) : 1.0);
}

void NiConfig::validate() const {
    if (!(alpha > 0.0)) throw InvalidConfig("NiConfig: alpha must be > 0");
    if (!(a > 1.0)) throw InvalidConfig("NiConfig: a must be > 1");
    if (J < 1 || J > 30) throw InvalidConfig("NiConfig: J out of range");
    if (!(noise_scale >= 0.0)) throw InvalidConfig("NiConfig: bad noise scale");
}

NiRecord sanitize_ni(double x, const NiConfig& cfg, Rng& rng) {
    NiRecord z(cfg.J);
    sanitize_ni_into(x, cfg, rng, z);
    return z;
}

void sanitize_ni_into(double x, const NiConfig& cfg, Rng& rng, NiRecord& z) {
    cfg.validate();
    if (z.max_level() != cfg.J)
        throw InvalidConfig("sanitize_ni_into: record level mismatch");
    const double sigma = cfg.sigma();
    // Level -1: phi == 1 everywhere.
    {
        const double noise =
            cfg.noise_on_scaling ? cfg.noise_scale * sigma / cfg.alpha * rng.laplace()
                                 : 0.0;
        z.at(-1, 0) = 1.0 + noise;
    }
    for (int j = 0; j < cfg.J; ++j) {
        const double scale =
            cfg.noise_scale * NiConfig::level_scale(j, cfg.a) * sigma / cfg.alpha;
        const double amp =
            std::ldexp(1.0, j / 2) * (j % 2 ? std::sqrt(2.0) : 1.0);
        double scaled = std::ldexp(x, j);
        int active = static_cast<int>(scaled);
        if (active >= (1 << j)) active = (1 << j) - 1;
        const double psi = (scaled - active) < 0.5 ? amp : -amp;
        for (int k = 0; k < (1 << j); ++k) {
            const double signal = k == active ? psi : 0.0;
            z.at(j, k) = signal + scale * rng.laplace();
        }
    }
}

int select_J_ni(std::size_t n, double alpha, double s_eff, double a) {
    const double budget = static_cast<double>(n) * alpha * alpha;
    if (!(budget > 1.0))
        throw InsufficientBudget("select_J_ni: n alpha^2 must exceed 1");
    double log2_twoJ;
    if (s_eff > 0.75) {
        const double lg = std::log(budget);
        log2_twoJ = (std::log2(budget) - (4.0 * a + 1.0) * std::log2(lg)) / 3.0;
    } else {
        log2_twoJ = 2.0 / (4.0 * s_eff + 3.0) * std::log2(budget);
    }
    int J = static_cast<int>(std::lround(log2_twoJ));
    if (J < 1) J = 1;
    if (J > 24) J = 24;
    return J;
}

double estimate_quadratic_ni(const std::vector<NiRecord>& records) {
    const std::size_t n = records.size();
    if (n < 2)
        throw SampleTooSmall("estimate_quadratic_ni: need at least 2 records");
    const std::size_t width = records.front().size();
    for (const auto& r : records)
        if (r.size() != width)
            throw InvalidConfig("estimate_quadratic_ni: record shape mismatch");
    // sum_{i != h} z_i z_h = (sum_i z_i)^2 - sum_i z_i^2, per coordinate.
    std::vector<double> sum(width, 0.0), sumsq(width, 0.0);
    for (const auto& r : records)
        for (std::size_t c = 0; c < width; ++c) {
            sum[c] += r[c];
            sumsq[c] += r[c] * r[c];
        }
    double acc = 0.0;
    for (std::size_t c = 0; c < width; ++c) acc += sum[c] * sum[c] - sumsq[c];
    return acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double ni_logratio_bound(const NiConfig& cfg) {
    cfg.validate();
    // Per level j: two active positions, each |psi - psi'| <= 2 in mother-
    // wavelet units, scaled by 2^{j/2} and divided by sigma_j 2^{-j/2}
    // leaves 4 (1 v j)^{-a}. Level -1 contributes nothing since phi == 1.
    double acc = 0.0;
    for (int j = 0; j < cfg.J; ++j)
        acc += 4.0 * std::pow(j < 1 ? 1.0 : static_cast<double>(j), -cfg.a);
    return cfg.alpha / cfg.sigma() * acc;
}

double ni_logratio(const NiRecord& z, double x, double x_prime,
                   const NiConfig& cfg) {
    const double sigma = cfg.sigma();
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto idx = CoeffTable::index_of(i);
        const double lam =
            cfg.alpha / (sigma * NiConfig::level_scale(idx.level, cfg.a));
        acc += lam * (std::fabs(z[i] - eval_wavelet(idx, x_prime)) -
                      std::fabs(z[i] - eval_wavelet(idx, x)));
    }
    return acc;
}

} // namespace ldpq
