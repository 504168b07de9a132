// Command-line front end: simulate / ratefit / audit / gof / plot.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ldpq/audit.hpp"
#include "ldpq/channel_ni.hpp"
#include "ldpq/channel_si.hpp"
#include "ldpq/density.hpp"
#include "ldpq/errors.hpp"
#include "ldpq/gof.hpp"
#include "ldpq/harness.hpp"

namespace {

struct GofRun {
    ldpq::GofConfig cfg;
    double separation = 0.0;
    int level = 3;
    std::size_t calibration_reps = 200;
    std::uint64_t seed = 1;
    std::string csv_path;
    bool explicit_c = false;
};

GofRun parse_gof_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ldpq::InvalidConfig("cannot open config file: " + path);
    GofRun run;
    std::string line, section;
    while (std::getline(is, line)) {
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "gof")
                throw ldpq::InvalidConfig("unknown section: [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ldpq::InvalidConfig("expected key = value: " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "protocol") run.cfg.protocol = ldpq::protocol_from_name(value);
        else if (key == "n") run.cfg.n = std::stoull(value);
        else if (key == "alpha") run.cfg.alpha = std::stod(value);
        else if (key == "s") run.cfg.s_eff = std::stod(value);
        else if (key == "a") run.cfg.a = std::stod(value);
        else if (key == "gamma") run.cfg.gamma = std::stod(value);
        else if (key == "K") run.cfg.K = std::stod(value);
        else if (key == "M") run.cfg.M = std::stod(value);
        else if (key == "C") { run.cfg.C = std::stod(value); run.explicit_c = true; }
        else if (key == "separation") run.separation = std::stod(value);
        else if (key == "level") run.level = std::stoi(value);
        else if (key == "calibration_replications")
            run.calibration_reps = std::stoull(value);
        else if (key == "seed") run.seed = std::stoull(value);
        else if (key == "csv") run.csv_path = value;
        else throw ldpq::InvalidConfig("unknown key in [gof]: " + key);
    }
    return run;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const ldpq::ExperimentConfig cfg =
        ldpq::ExperimentConfig::parse_file(config_path);
    const std::vector<ldpq::ResultRow> rows = ldpq::run_experiment(cfg);
    std::ofstream os(out_path);
    if (!os) throw ldpq::InvalidConfig("cannot open output: " + out_path);
    ldpq::write_csv(rows, os);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
}

int cmd_ratefit(const std::string& in_path, const std::string& protocol,
                double alpha) {
    std::ifstream is(in_path);
    if (!is) throw ldpq::InvalidConfig("cannot open csv: " + in_path);
    const auto rows = ldpq::read_csv(is);
    const ldpq::RateFit fit =
        ldpq::fit_rate(rows, ldpq::protocol_from_name(protocol), alpha);
    std::cout << "protocol " << protocol << "  slope " << fit.slope
              << "  stderr " << fit.slope_stderr << "  intercept "
              << fit.intercept << "\n";
    if (fit.has_elbow)
        std::cout << "elbow at log2(n alpha^2) = " << fit.elbow_log2_nalpha2
                  << "  slopes " << fit.slope_left << " / " << fit.slope_right
                  << "\n";
    else
        std::cout << "no elbow detected\n";
    return 0;
}

int cmd_audit(const std::string& channel, double alpha, double a, int J,
              double tau, std::size_t trials, std::size_t grid,
              const std::string& sigma, std::uint64_t seed,
              const std::string& csv_path) {
    ldpq::AuditReport report;
    if (channel == "ni") {
        ldpq::NiConfig cfg;
        cfg.alpha = alpha;
        cfg.a = a;
        cfg.J = J;
        cfg.variant = sigma == "paper" ? ldpq::SigmaVariant::paper
                                       : ldpq::SigmaVariant::normalized;
        ldpq::Rng rng(seed);
        report = ldpq::audit_ni(cfg, trials, rng);
    } else if (channel == "rr") {
        report = ldpq::audit_rr(tau, alpha, grid);
    } else {
        throw ldpq::InvalidConfig("audit: channel must be 'ni' or 'rr'");
    }
    std::cout << report.to_text() << "\n";
    if (!csv_path.empty()) {
        const bool fresh = !std::ifstream(csv_path).good();
        std::ofstream os(csv_path, std::ios::app);
        if (fresh) os << ldpq::AuditReport::csv_header() << "\n";
        os << report.to_csv_row() << "\n";
    }
    return report.pass ? 0 : 1;
}

int cmd_gof(const std::string& config_path) {
    GofRun run = parse_gof_config(config_path);
    if (!run.explicit_c)
        run.cfg.C = ldpq::calibrate_gof_constant(run.cfg, run.calibration_reps,
                                                 run.seed);
    // Alternative at the requested L2 distance from uniform:
    // ||f - f0||_2 = delta 2^{-m s} for the single-level family.
    ldpq::DyadicDensity f = ldpq::DyadicDensity::uniform();
    if (run.separation > 0.0) {
        ldpq::BesovSpec spec;
        spec.s = run.cfg.s_eff;
        spec.delta =
            run.separation * std::pow(2.0, run.level * run.cfg.s_eff);
        spec.levels = {run.level};
        spec.sign_seed = run.seed;
        f = ldpq::make_besov_density(spec);
    }
    ldpq::Rng rng = ldpq::Rng::derive(run.seed, 0x60f, 1);
    const std::vector<double> points = ldpq::sample(f, run.cfg.n, rng);
    const ldpq::TestOutcome outcome =
        run.cfg.protocol == ldpq::Protocol::NI
            ? ldpq::gof_test_ni(points, run.cfg, rng)
            : ldpq::gof_test_si(points, run.cfg, rng);
    std::cout << "protocol " << ldpq::protocol_name(run.cfg.protocol) << "  n "
              << run.cfg.n << "  separation " << run.separation
              << "  statistic " << outcome.statistic << "  threshold "
              << outcome.threshold << "  decision " << outcome.decision << "\n";
    if (!run.csv_path.empty()) {
        const bool fresh = !std::ifstream(run.csv_path).good();
        std::ofstream os(run.csv_path, std::ios::app);
        if (fresh)
            os << "protocol,n,alpha,s,separation,statistic,threshold,decision\n";
        os.precision(17);
        os << ldpq::protocol_name(run.cfg.protocol) << ',' << run.cfg.n << ','
           << run.cfg.alpha << ',' << run.cfg.s_eff << ',' << run.separation
           << ',' << outcome.statistic << ',' << outcome.threshold << ','
           << outcome.decision << "\n";
    }
    return 0;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
    std::ifstream is(in_path);
    if (!is) throw ldpq::InvalidConfig("cannot open csv: " + in_path);
    const auto rows = ldpq::read_csv(is);
    std::ofstream os(out_path);
    if (!os) throw ldpq::InvalidConfig("cannot open output: " + out_path);
    os << ldpq::plot_script(rows, in_path);
    std::cout << "wrote plot script to " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Locally private quadratic-functional estimation toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, protocol = "ni";
    double alpha = 1.0;

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo sweep");
    simulate->add_option("--config", config_path, "experiment config file")
        ->required();
    simulate->add_option("--out", out_path, "output CSV path")->required();

    auto* ratefit = app.add_subcommand("ratefit", "Fit a log-log rate");
    ratefit->add_option("--in", in_path, "input CSV")->required();
    ratefit->add_option("--protocol", protocol, "ni or si")->required();
    ratefit->add_option("--alpha", alpha, "alpha slice to fit");

    std::string channel = "ni", sigma = "normalized", audit_csv;
    double a = 2.0, tau = 1.0;
    int J = 4;
    std::size_t trials = 10000, grid = 10001;
    std::uint64_t seed = 1;
    auto* audit = app.add_subcommand("audit", "Privacy certification");
    audit->add_option("--channel", channel, "ni or rr")->required();
    audit->add_option("--alpha", alpha, "privacy budget");
    audit->add_option("--a", a, "noise exponent (ni)");
    audit->add_option("--J", J, "resolution (ni)");
    audit->add_option("--tau", tau, "clamp (rr)");
    audit->add_option("--trials", trials, "sampled triples (ni)");
    audit->add_option("--grid", grid, "grid size (rr)");
    audit->add_option("--sigma", sigma, "normalized or paper");
    audit->add_option("--seed", seed, "rng seed");
    audit->add_option("--csv", audit_csv, "append report row to this CSV");

    auto* gof = app.add_subcommand("gof", "Goodness-of-fit test");
    gof->add_option("--config", config_path, "gof config file")->required();

    auto* plot = app.add_subcommand("plot", "Emit a plotting script");
    plot->add_option("--in", in_path, "input CSV")->required();
    plot->add_option("--out", out_path, "output script path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_path);
        if (ratefit->parsed()) return cmd_ratefit(in_path, protocol, alpha);
        if (audit->parsed())
            return cmd_audit(channel, alpha, a, J, tau, trials, grid, sigma,
                             seed, audit_csv);
        if (gof->parsed()) return cmd_gof(config_path);
        if (plot->parsed()) return cmd_plot(in_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
