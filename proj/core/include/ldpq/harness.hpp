#ifndef LDPQ_HARNESS_HPP
#define LDPQ_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ldpq/density.hpp"
#include "ldpq/gof.hpp"

namespace ldpq {

// Generator metadata: the Besov-ball parameters of the densities swept over.
struct GeneratorSpec {
    double s = 0.3;
    double delta = 0.5;
    std::vector<int> levels = {3};
    double p = 2.0;  // class metadata only
    double q = 0.0;  // 0 encodes infinity
    double L = 1.0;
    double M = 2.0;  // sup-norm bound handed to the SI channel
};

struct ExperimentConfig {
    std::vector<Protocol> protocols = {Protocol::NI, Protocol::SI};
    std::vector<std::size_t> n_grid;
    std::vector<double> alpha_grid = {1.0};
    GeneratorSpec generator;
    std::size_t replications = 2;
    std::uint64_t seed = 1;
    double a = 2.0;
    double K = 2.0;
    SigmaVariant variant = SigmaVariant::normalized;
    unsigned threads = 1;

    void validate() const;

    // Line-based `key = value` text with sections [experiment], [generator],
    // [channel]; unknown keys rejected.
    static ExperimentConfig parse(std::istream& is);
    static ExperimentConfig parse_file(const std::string& path);
};

struct ResultRow {
    Protocol protocol;
    std::size_t n;
    double alpha;
    double s;
    std::size_t replication;
    double estimate;
    double true_d;
    double sq_error; // (estimate - true_d)^2
};

// One Monte Carlo measurement per (protocol, n, alpha) cell and replication;
// the density is drawn per cell, streams are derived per (cell, replication),
// so output is byte-identical regardless of thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os);
std::vector<ResultRow> read_csv(std::istream& is);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    bool has_elbow = false;
    double elbow_log2_nalpha2 = 0.0;
    double slope_left = 0.0;
    double slope_right = 0.0;
};

// Least squares of log2(cell-mean MSE) on log2(n alpha^2), plus an
// exhaustive two-segment breakpoint search. Needs >= 4 distinct n alpha^2.
RateFit fit_rate(const std::vector<ResultRow>& rows, Protocol protocol,
                 double alpha);

// Standalone matplotlib script plotting log-log MSE vs n alpha^2 per
// protocol, reading from csv_path. Deterministic bytes for identical rows.
std::string plot_script(const std::vector<ResultRow>& rows,
                        const std::string& csv_path);

std::string protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

} // namespace ldpq

#endif
