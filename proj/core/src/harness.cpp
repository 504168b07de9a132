#include "ldpq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "ldpq/channel_ni.hpp"
#include "ldpq/channel_si.hpp"
#include "ldpq/errors.hpp"

namespace ldpq {

std::string protocol_name(Protocol p) {
    return p == Protocol::NI ? "ni" : "si";
}

Protocol protocol_from_name(const std::string& name) {
    if (name == "ni" || name == "NI") return Protocol::NI;
    if (name == "si" || name == "SI") return Protocol::SI;
    throw InvalidConfig("unknown protocol: " + name);
}

void ExperimentConfig::validate() const {
    if (protocols.empty()) throw InvalidConfig("experiment: empty protocol set");
    if (n_grid.empty()) throw InvalidConfig("experiment: empty n grid");
    if (alpha_grid.empty()) throw InvalidConfig("experiment: empty alpha grid");
    if (replications < 2) throw InvalidConfig("experiment: replications must be >= 2");
    for (std::size_t n : n_grid)
        if (n < 4 || n % 2 != 0)
            throw InvalidConfig("experiment: each n must be even and >= 4");
    for (double al : alpha_grid)
        if (!(al > 0.0 && al <= 1.0))
            throw InvalidConfig("experiment: alpha must lie in (0,1]");
    if (!(a > 1.0)) throw InvalidConfig("experiment: a must be > 1");
    if (!(K >= 2.0)) throw InvalidConfig("experiment: K must be >= 2");
    if (!(generator.s > 0.0 && generator.s <= 1.0))
        throw InvalidConfig("experiment: generator s must lie in (0,1]");
    if (!(generator.M > 0.0)) throw InvalidConfig("experiment: M must be > 0");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidConfig("bad numeric value for key '" + key + "': " + v);
    }
}

} // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& is) {
    ExperimentConfig cfg;
    cfg.protocols.clear();
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            if (section != "experiment" && section != "generator" &&
                section != "channel")
                throw InvalidConfig("unknown config section: [" + section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config line " + std::to_string(lineno) +
                                ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section == "experiment") {
            if (key == "protocols") {
                for (const auto& p : split_list(value))
                    cfg.protocols.push_back(protocol_from_name(p));
            } else if (key == "n") {
                for (const auto& v : split_list(value))
                    cfg.n_grid.push_back(
                        static_cast<std::size_t>(parse_double(key, v)));
            } else if (key == "alpha") {
                cfg.alpha_grid.clear();
                for (const auto& v : split_list(value))
                    cfg.alpha_grid.push_back(parse_double(key, v));
            } else if (key == "replications") {
                cfg.replications =
                    static_cast<std::size_t>(parse_double(key, value));
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(parse_double(key, value));
            } else if (key == "threads") {
                cfg.threads =
                    static_cast<unsigned>(parse_double(key, value));
            } else {
                throw InvalidConfig("unknown key in [experiment]: " + key);
            }
        } else if (section == "generator") {
            if (key == "s") cfg.generator.s = parse_double(key, value);
            else if (key == "delta") cfg.generator.delta = parse_double(key, value);
            else if (key == "levels") {
                cfg.generator.levels.clear();
                for (const auto& v : split_list(value))
                    cfg.generator.levels.push_back(
                        static_cast<int>(parse_double(key, v)));
            } else if (key == "p") cfg.generator.p = parse_double(key, value);
            else if (key == "q") {
                cfg.generator.q = (value == "inf") ? 0.0 : parse_double(key, value);
            } else if (key == "L") cfg.generator.L = parse_double(key, value);
            else if (key == "M") cfg.generator.M = parse_double(key, value);
            else throw InvalidConfig("unknown key in [generator]: " + key);
        } else if (section == "channel") {
            if (key == "a") cfg.a = parse_double(key, value);
            else if (key == "K") cfg.K = parse_double(key, value);
            else if (key == "sigma") {
                if (value == "normalized") cfg.variant = SigmaVariant::normalized;
                else if (value == "paper") cfg.variant = SigmaVariant::paper;
                else throw InvalidConfig("sigma must be 'normalized' or 'paper'");
            } else {
                throw InvalidConfig("unknown key in [channel]: " + key);
            }
        } else {
            throw InvalidConfig("config line " + std::to_string(lineno) +
                                ": key outside any section");
        }
    }
    if (cfg.protocols.empty())
        cfg.protocols = {Protocol::NI, Protocol::SI};
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InvalidConfig("cannot open config file: " + path);
    return parse(is);
}

namespace {

struct Cell {
    Protocol protocol;
    std::size_t n;
    double alpha;
};

double run_ni_once(const DyadicDensity& d, std::size_t n, double alpha,
                   const ExperimentConfig& cfg, Rng& rng) {
    NiConfig ni;
    ni.alpha = alpha;
    ni.a = cfg.a;
    ni.variant = cfg.variant;
    ni.J = select_J_ni(n, alpha, cfg.generator.s, cfg.a);
    const std::vector<double> points = sample(d, n, rng);
    const std::size_t width = std::size_t{1} << ni.J;
    std::vector<double> sum(width, 0.0), sumsq(width, 0.0);
    NiRecord z(ni.J);
    for (double x : points) {
        sanitize_ni_into(x, ni, rng, z);
        for (std::size_t c = 0; c < width; ++c) {
            sum[c] += z[c];
            sumsq[c] += z[c] * z[c];
        }
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < width; ++c) acc += sum[c] * sum[c] - sumsq[c];
    return acc / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double run_si_once(const DyadicDensity& d, std::size_t n, double alpha,
                   const ExperimentConfig& cfg, Rng& rng) {
    SiConfig si;
    si.alpha = alpha;
    si.a = cfg.a;
    si.K = cfg.K;
    si.M = cfg.generator.M;
    si.s_eff = cfg.generator.s;
    si.variant = cfg.variant;
    si.J = select_J_si(n / 2, alpha, cfg.generator.s);
    si.tau = select_tau(cfg.K, cfg.generator.M, si.J, cfg.a, cfg.generator.s);
    const std::vector<double> points = sample(d, n, rng);
    return run_si_protocol(points, si, rng);
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<Cell> cells;
    for (Protocol p : cfg.protocols)
        for (std::size_t n : cfg.n_grid)
            for (double alpha : cfg.alpha_grid)
                cells.push_back(Cell{p, n, alpha});

    // Density per (n, alpha) position in the grid, so NI and SI face the
    // same generator draw; streams are derived per (cell, replication).
    std::vector<ResultRow> rows(cells.size() * cfg.replications);
    const std::size_t tasks = rows.size();
    const unsigned nthreads = std::max(1u, cfg.threads);

    auto worker = [&](unsigned tid) {
        for (std::size_t t = tid; t < tasks; t += nthreads) {
            const std::size_t ci = t / cfg.replications;
            const std::size_t rep = t % cfg.replications;
            const Cell& cell = cells[ci];
            // Generator seeded by grid position only (not protocol).
            const std::size_t gen_index =
                ci % (cfg.n_grid.size() * cfg.alpha_grid.size());
            BesovSpec spec;
            spec.s = cfg.generator.s;
            spec.delta = cfg.generator.delta;
            spec.levels = cfg.generator.levels;
            spec.sign_seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (gen_index + 1));
            const DyadicDensity d = make_besov_density(spec);
            const double true_d = quad_functional(d);

            Rng rng = Rng::derive(cfg.seed, ci + 1, rep);
            const double estimate =
                cell.protocol == Protocol::NI
                    ? run_ni_once(d, cell.n, cell.alpha, cfg, rng)
                    : run_si_once(d, cell.n, cell.alpha, cfg, rng);
            const double err = estimate - true_d;
            rows[t] = ResultRow{cell.protocol, cell.n,    cell.alpha,
                                cfg.generator.s, rep,      estimate,
                                true_d,          err * err};
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned tid = 0; tid < nthreads; ++tid)
            pool.emplace_back(worker, tid);
        for (auto& th : pool) th.join();
    }
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    os << "protocol,n,alpha,s,replication,estimate,true_d,sq_error\n";
    for (const auto& r : rows) {
        os << protocol_name(r.protocol) << ',' << r.n << ','
           << format_double(r.alpha) << ',' << format_double(r.s) << ','
           << r.replication << ',' << format_double(r.estimate) << ','
           << format_double(r.true_d) << ',' << format_double(r.sq_error)
           << '\n';
    }
}

std::vector<ResultRow> read_csv(std::istream& is) {
    std::vector<ResultRow> rows;
    std::string line;
    if (!std::getline(is, line))
        throw InvalidConfig("csv: missing header");
    if (trim(line) != "protocol,n,alpha,s,replication,estimate,true_d,sq_error")
        throw InvalidConfig("csv: unexpected header: " + line);
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_list(line);
        if (fields.size() != 8)
            throw InvalidConfig("csv: expected 8 fields: " + line);
        ResultRow r;
        r.protocol = protocol_from_name(fields[0]);
        r.n = static_cast<std::size_t>(parse_double("n", fields[1]));
        r.alpha = parse_double("alpha", fields[2]);
        r.s = parse_double("s", fields[3]);
        r.replication =
            static_cast<std::size_t>(parse_double("replication", fields[4]));
        r.estimate = parse_double("estimate", fields[5]);
        r.true_d = parse_double("true_d", fields[6]);
        r.sq_error = parse_double("sq_error", fields[7]);
        rows.push_back(r);
    }
    return rows;
}

namespace {

struct LineFit {
    double slope, intercept, rss, slope_se;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                      std::size_t lo, std::size_t hi) {
    const std::size_t m = hi - lo;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw InvalidConfig("fit_rate: degenerate x-range");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.rss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.rss += r * r;
    }
    f.slope_se =
        m > 2 ? std::sqrt(f.rss / static_cast<double>(m - 2) / sxx) : 0.0;
    return f;
}

} // namespace

RateFit fit_rate(const std::vector<ResultRow>& rows, Protocol protocol,
                 double alpha) {
    // Cell-mean MSE per n at the fixed alpha.
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& r : rows) {
        if (r.protocol != protocol || std::fabs(r.alpha - alpha) > 1e-12)
            continue;
        auto& [sum, count] = acc[r.n];
        sum += r.sq_error;
        ++count;
    }
    if (acc.size() < 4)
        throw InvalidConfig("fit_rate: need >= 4 distinct n alpha^2 values");
    std::vector<double> x, y;
    for (const auto& [n, sc] : acc) {
        x.push_back(std::log2(static_cast<double>(n) * alpha * alpha));
        y.push_back(std::log2(sc.first / static_cast<double>(sc.second)));
    }

    const LineFit single = least_squares(x, y, 0, x.size());
    RateFit fit;
    fit.slope = single.slope;
    fit.intercept = single.intercept;
    fit.slope_stderr = single.slope_se;

    // Exhaustive two-segment breakpoint search, >= 2 points per side.
    if (x.size() >= 4 && single.rss > 1e-20) {
        double best_rss = single.rss;
        for (std::size_t i = 1; i + 2 < x.size(); ++i) {
            const LineFit left = least_squares(x, y, 0, i + 1);
            const LineFit right = least_squares(x, y, i + 1, x.size());
            const double rss = left.rss + right.rss;
            if (rss < best_rss) {
                best_rss = rss;
                fit.elbow_log2_nalpha2 = x[i];
                fit.slope_left = left.slope;
                fit.slope_right = right.slope;
            }
        }
        fit.has_elbow = best_rss <= 0.25 * single.rss;
    }
    return fit;
}

std::string plot_script(const std::vector<ResultRow>& rows,
                        const std::string& csv_path) {
    std::vector<Protocol> present;
    for (Protocol p : {Protocol::NI, Protocol::SI})
        for (const auto& r : rows)
            if (r.protocol == p) {
                present.push_back(p);
                break;
            }
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "# log-log MSE vs n*alpha^2, one series per protocol\n"
       << "import csv, collections\n"
       << "import matplotlib\n"
       << "matplotlib.use('Agg')\n"
       << "import matplotlib.pyplot as plt\n"
       << "acc = collections.defaultdict(lambda: [0.0, 0])\n"
       << "with open('" << csv_path << "') as fh:\n"
       << "    for row in csv.DictReader(fh):\n"
       << "        key = (row['protocol'], int(row['n']), float(row['alpha']))\n"
       << "        acc[key][0] += float(row['sq_error'])\n"
       << "        acc[key][1] += 1\n"
       << "fig, ax = plt.subplots()\n";
    for (Protocol p : present) {
        const std::string name = protocol_name(p);
        os << "pts = sorted((n * a * a, s / c) for (proto, n, a), (s, c) in"
              " acc.items() if proto == '"
           << name << "')\n"
           << "if pts:\n"
           << "    ax.loglog([p[0] for p in pts], [p[1] for p in pts],"
              " marker='o', label='"
           << name << "')\n";
    }
    os << "ax.set_xlabel('n * alpha^2')\n"
       << "ax.set_ylabel('MSE')\n"
       << "ax.legend()\n"
       << "fig.savefig('mse_rates.png', dpi=150)\n";
    return os.str();
}

} // namespace ldpq
