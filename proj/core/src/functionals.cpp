#include "ldpq/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "ldpq/errors.hpp"

namespace ldpq {

SmoothFunctional SmoothFunctional::quadratic() {
    SmoothFunctional f;
    f.phi = [](double t) { return t * t; };
    f.dphi = [](double t) { return 2.0 * t; };
    f.ddphi = [](double) { return 2.0; };
    f.d3_bound = 0.0;
    f.f_min = 0.0;
    f.f_max = 2.0;
    return f;
}

SmoothFunctional SmoothFunctional::entropy(double f_min, double f_max) {
    if (!(f_min > 0.0))
        throw InvalidConfig("entropy functional needs f_min > 0");
    SmoothFunctional f;
    f.phi = [](double t) { return t * std::log(t); };
    f.dphi = [](double t) { return std::log(t) + 1.0; };
    f.ddphi = [](double t) { return 1.0 / t; };
    f.d3_bound = 1.0 / (f_min * f_min);
    f.f_min = f_min;
    f.f_max = f_max;
    return f;
}

double private_linear_functional(std::span<const double> points,
                                 const std::function<double(double)>& w,
                                 double tau_w, double alpha, Rng& rng) {
    if (points.empty())
        throw SampleTooSmall("private_linear_functional: no points");
    if (!(tau_w >= 0.0) || !std::isfinite(tau_w))
        throw InvalidConfig("private_linear_functional: weight bound invalid");
    if (tau_w == 0.0) return 0.0; // w == 0: the functional is exactly 0
    const double e = std::exp(alpha);
    const double c = tau_w * (e + 1.0) / (e - 1.0);
    double acc = 0.0;
    for (double x : points) {
        const double u = w(x);
        if (!(std::fabs(u) <= tau_w * (1.0 + 1e-12)))
            throw InvalidConfig(
                "private_linear_functional: |w(x)| exceeds the stated bound");
        const double p_head = 0.5 * (1.0 + u / c);
        acc += rng.bernoulli(p_head) ? c : -c;
    }
    return acc / static_cast<double>(points.size());
}

FunctionalEstimate integral_functional_estimate(
    std::span<const double> points, const SmoothFunctional& phi,
    const SiConfig& cfg, Rng& rng) {
    cfg.validate();
    if (!phi.phi || !phi.dphi || !phi.ddphi)
        throw InvalidConfig("integral_functional_estimate: missing evaluators");
    const std::size_t third = points.size() / 3;
    if (third < 1)
        throw SampleTooSmall("integral_functional_estimate: need >= 3 points");

    // Part A: private density estimate, streamed coefficient mean.
    const NiConfig stage1_cfg = cfg.stage1_config();
    CoeffTable mean(cfg.J);
    for (std::size_t i = 0; i < third; ++i) {
        const NiRecord z = sanitize_ni(points[i], stage1_cfg, rng);
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += z[c];
    }
    for (std::size_t c = 0; c < mean.size(); ++c)
        mean[c] /= static_cast<double>(third);

    // fhat is piecewise constant on the 2^J grid; clamp to the working range
    // when the functional declares one (phi' may blow up outside it).
    const std::size_t ncells = std::size_t{1} << cfg.J;
    std::vector<double> fcells(ncells);
    const double width = 1.0 / static_cast<double>(ncells);
    for (std::size_t i = 0; i < ncells; ++i) {
        double v = project_eval(mean, (static_cast<double>(i) + 0.5) * width);
        if (phi.f_min > 0.0)
            v = std::max(phi.f_min, std::min(phi.f_max, v));
        fcells[i] = v;
    }
    const auto fhat_at = [&](double x) {
        std::size_t c = static_cast<std::size_t>(std::ldexp(x, cfg.J));
        if (c >= ncells) c = ncells - 1;
        return fcells[c];
    };

    // (i) exact plug-in integral of the fhat-only bracket.
    double plug_in = 0.0;
    for (double v : fcells)
        plug_in += phi.phi(v) - phi.dphi(v) * v + 0.5 * phi.ddphi(v) * v * v;
    plug_in *= width;

    // (ii) private linear functional with weight phi'(fhat) - phi''(fhat) fhat.
    const auto w1 = [&](double x) {
        const double v = fhat_at(x);
        return phi.dphi(v) - phi.ddphi(v) * v;
    };
    double bound1 = 0.0;
    for (double v : fcells)
        bound1 = std::max(bound1, std::fabs(phi.dphi(v) - phi.ddphi(v) * v));
    const double linear_term = private_linear_functional(
        points.subspan(third, third), w1, bound1, cfg.alpha, rng);

    // (iii) weighted quadratic term via a second randomized-response pass with
    // weight phi''(fhat) clamp(fhat, tau); halved per the expansion.
    const auto w2 = [&](double x) {
        const double v = fhat_at(x);
        return phi.ddphi(v) * clamp(v, cfg.tau);
    };
    double bound2 = 0.0;
    for (double v : fcells)
        bound2 = std::max(bound2, std::fabs(phi.ddphi(v) * clamp(v, cfg.tau)));
    const double quad_term =
        0.5 * private_linear_functional(points.subspan(2 * third, third), w2,
                                        bound2, cfg.alpha, rng);

    double sup_fhat = 0.0;
    for (double v : fcells) sup_fhat = std::max(sup_fhat, std::fabs(v));
    FunctionalEstimate out;
    out.value = plug_in + linear_term + quad_term;
    // int |f - fhat|^3 <= (||f||_inf + ||fhat||_inf)^3, an a-priori cap.
    const double gap = cfg.M + sup_fhat;
    out.remainder_bound = phi.d3_bound / 6.0 * gap * gap * gap;
    return out;
}

} // namespace ldpq
