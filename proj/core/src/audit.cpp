#include "ldpq/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ldpq/channel_si.hpp"
#include "ldpq/errors.hpp"
#include "ldpq/haar.hpp"

namespace ldpq {

namespace {

constexpr double kEmpiricalSlack = 1e-12;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

std::string AuditReport::to_text() const {
    std::ostringstream os;
    os << "channel " << channel << "  alpha " << fmt(alpha)
       << "  analytic " << fmt(analytic_bound) << "  empirical "
       << fmt(empirical_max) << "  samples " << samples << "  "
       << (pass ? "PASS" : "FAIL");
    return os.str();
}

std::string AuditReport::csv_header() {
    return "channel,alpha,analytic_bound,empirical_max,samples,pass";
}

std::string AuditReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(17);
    os << channel << ',' << alpha << ',' << analytic_bound << ','
       << empirical_max << ',' << samples << ',' << (pass ? 1 : 0);
    return os.str();
}

AuditReport audit_ni(const NiConfig& cfg, std::size_t trials, Rng& rng) {
    cfg.validate();
    if (trials < 1) throw InvalidConfig("audit_ni: trials must be >= 1");
    AuditReport report;
    report.channel = "ni";
    report.alpha = cfg.alpha;
    report.analytic_bound = ni_logratio_bound(cfg);
    report.samples = trials;
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const double x = rng.uniform();
        const double x_prime = rng.uniform();
        const NiRecord z = sanitize_ni(x, cfg, rng);
        worst = std::max(worst, ni_logratio(z, x, x_prime, cfg));
    }
    report.empirical_max = worst;
    report.pass = report.analytic_bound <= cfg.alpha + kEmpiricalSlack &&
                  report.empirical_max <= cfg.alpha + kEmpiricalSlack;
    return report;
}

AuditReport audit_rr(double tau, double alpha, std::size_t grid) {
    if (grid < 2) throw InvalidConfig("audit_rr: grid must be >= 2");
    if (!(tau > 0.0) || !(alpha > 0.0))
        throw InvalidConfig("audit_rr: tau and alpha must be > 0");
    const double e = std::exp(alpha);
    const double c = tau * (e + 1.0) / (e - 1.0);
    double p_min = 1.0, p_max = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const double u = -tau + 2.0 * tau * static_cast<double>(i) /
                                    static_cast<double>(grid - 1);
        const double p = 0.5 * (1.0 + u / c);
        p_min = std::min(p_min, p);
        p_max = std::max(p_max, p);
    }
    // The ratio is monotone in u - u', so the grid extremes dominate; the
    // worst case u = tau, u' = -tau attains exactly e^alpha.
    const double worst_ratio =
        std::max(p_max / p_min, (1.0 - p_min) / (1.0 - p_max));
    AuditReport report;
    report.channel = "rr";
    report.alpha = alpha;
    report.analytic_bound = alpha;
    report.empirical_max = std::log(worst_ratio);
    report.samples = grid;
    report.pass = report.empirical_max <= alpha + kEmpiricalSlack;
    return report;
}

std::vector<ConcentrationRow> concentration_check(
    std::size_t n, const NiConfig& cfg, const DyadicDensity& d,
    const std::vector<double>& u_values, std::size_t replications, Rng& rng,
    double sup_bound_M) {
    cfg.validate();
    if (replications < 1000)
        throw InvalidConfig("concentration_check: need >= 1000 replications");
    const double x0 = 0.5;
    const double expected = project_eval(exact_coeffs(d, cfg.J), x0);

    const double sigma = cfg.sigma();
    const double c1 = 2.0 * sigma + 2.0 * std::sqrt(std::exp(1.0) * sup_bound_M);
    const double c2 = 2.0 * sigma + 1.0;
    const double level_factor =
        std::pow(static_cast<double>(cfg.J), cfg.a) * std::ldexp(1.0, cfg.J);
    const double scale1 =
        c1 * level_factor / (cfg.alpha * std::sqrt(static_cast<double>(n)));
    const double scale2 = c2 * level_factor / (static_cast<double>(n) * cfg.alpha);

    std::vector<std::size_t> exceed(u_values.size(), 0);
    NiRecord z(cfg.J);
    for (std::size_t r = 0; r < replications; ++r) {
        const std::vector<double> points = sample(d, n, rng);
        CoeffTable mean(cfg.J);
        for (double x : points) {
            sanitize_ni_into(x, cfg, rng, z);
            for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += z[c];
        }
        for (std::size_t c = 0; c < mean.size(); ++c)
            mean[c] /= static_cast<double>(n);
        const double dev = std::fabs(project_eval(mean, x0) - expected);
        for (std::size_t i = 0; i < u_values.size(); ++i) {
            const double u = u_values[i];
            const double thr = std::max(scale1 * std::sqrt(u), scale2 * u);
            if (dev >= thr) ++exceed[i];
        }
    }

    std::vector<ConcentrationRow> rows;
    rows.reserve(u_values.size());
    for (std::size_t i = 0; i < u_values.size(); ++i) {
        const double u = u_values[i];
        rows.push_back(ConcentrationRow{
            u, std::max(scale1 * std::sqrt(u), scale2 * u),
            static_cast<double>(exceed[i]) / static_cast<double>(replications),
            4.0 * std::exp(-u / 2.0)});
    }
    return rows;
}

} // namespace ldpq
