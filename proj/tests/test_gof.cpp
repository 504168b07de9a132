#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldpq/density.hpp"
#include "ldpq/errors.hpp"
#include "ldpq/gof.hpp"
#include "test_support.hpp"

using namespace ldpq;

TEST_CASE("gof_threshold closed forms") {
    GofConfig cfg;
    cfg.n = 1 << 14;
    cfg.alpha = 1.0;
    cfg.s_eff = 0.5;
    cfg.a = 2.0;
    // budget = 2^14; t^NI = budget^{-1/5} ln^{2.25}(budget)
    const double budget = std::pow(2.0, 14.0);
    const double lg = std::log(budget);
    cfg.protocol = Protocol::NI;
    CHECK(gof_threshold(cfg) ==
          doctest::Approx(std::pow(budget, -0.2) * std::pow(lg, 2.25))
              .epsilon(1e-12));
    cfg.protocol = Protocol::SI;
    CHECK(gof_threshold(cfg) ==
          doctest::Approx(std::pow(budget, -0.25) * std::pow(lg, 1.25))
              .epsilon(1e-12));

    cfg.n = 2;
    CHECK_THROWS_AS(gof_threshold(cfg), InsufficientBudget);
}

TEST_CASE("NI statistic is centered under the null") {
    GofConfig cfg;
    cfg.protocol = Protocol::NI;
    cfg.n = 2048;
    Rng rng(71);
    std::vector<double> stats;
    for (int r = 0; r < 200; ++r) {
        const auto xs = sample(cfg.null_density, cfg.n, rng);
        stats.push_back(gof_statistic_ni(xs, cfg, rng));
    }
    const auto ms = test::mean_se(stats);
    CHECK(std::fabs(ms.mean) < 4.0 * ms.se);
}

TEST_CASE("NI statistic estimates the truncated squared distance") {
    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.8;
    spec.levels = {1};
    spec.sign_seed = 2;
    const auto f = make_besov_density(spec);
    const double dist = quad_functional(f) - 1.0; // ||f - 1||^2, level 1 <= J

    GofConfig cfg;
    cfg.protocol = Protocol::NI;
    cfg.n = 2048;
    Rng rng(72);
    std::vector<double> stats;
    for (int r = 0; r < 200; ++r) {
        const auto xs = sample(f, cfg.n, rng);
        stats.push_back(gof_statistic_ni(xs, cfg, rng));
    }
    const auto ms = test::mean_se(stats);
    CHECK(std::fabs(ms.mean - dist) < 4.0 * ms.se);
}

TEST_CASE("SI statistic is centered under the null") {
    // Under H0 the stage-1 mean is unbiased for the projected null
    // coefficients and the stage-1 noise is symmetric, so both the clamped
    // response mean and the exact correction are centered at 0.
    GofConfig cfg;
    cfg.protocol = Protocol::SI;
    cfg.n = 4096;
    Rng rng(73);
    std::vector<double> h0;
    for (int r = 0; r < 200; ++r) {
        const auto xs = sample(cfg.null_density, cfg.n, rng);
        h0.push_back(gof_statistic_si(xs, cfg, rng));
    }
    const auto ms0 = test::mean_se(h0);
    CHECK(std::fabs(ms0.mean) < 4.0 * ms0.se);
}

TEST_CASE("calibrated test holds its level") {
    GofConfig cfg;
    cfg.protocol = Protocol::NI;
    cfg.n = 1024;
    cfg.gamma = 0.10;
    cfg.C = calibrate_gof_constant(cfg, 200, 99);
    CHECK(cfg.C > 0.0);

    Rng rng(74);
    int rejections = 0;
    const int reps = 400;
    for (int r = 0; r < reps; ++r) {
        const auto xs = sample(cfg.null_density, cfg.n, rng);
        rejections += gof_test_ni(xs, cfg, rng).decision;
    }
    const double rate = static_cast<double>(rejections) / reps;
    // binomial 4-sigma band around gamma (plus calibration noise slack)
    CHECK(rate < cfg.gamma + 4.0 * std::sqrt(cfg.gamma * (1.0 - cfg.gamma) /
                                             reps) + 0.05);
}

TEST_CASE("test outcome wiring") {
    GofConfig cfg;
    cfg.protocol = Protocol::NI;
    cfg.n = 512;
    cfg.C = 1e9; // threshold out of reach: never reject
    Rng rng(75);
    const auto xs = sample(cfg.null_density, cfg.n, rng);
    const auto out = gof_test_ni(xs, cfg, rng);
    CHECK(out.decision == 0);
    CHECK(out.threshold == doctest::Approx(1e9 * gof_threshold(cfg)));

    cfg.protocol = Protocol::SI;
    cfg.C = 1e-12;
    Rng rng2(76);
    BesovSpec spec;
    spec.delta = 0.9;
    spec.levels = {1};
    const auto f = make_besov_density(spec);
    const auto ys = sample(f, cfg.n, rng2);
    const auto out2 = gof_test_si(ys, cfg, rng2);
    const bool expected = out2.statistic > out2.threshold;
    CHECK(out2.decision == (expected ? 1 : 0));
}

TEST_CASE("calibrate_gof_constant is deterministic in the seed") {
    GofConfig cfg;
    cfg.protocol = Protocol::SI;
    cfg.n = 1024;
    const double c1 = calibrate_gof_constant(cfg, 50, 7);
    const double c2 = calibrate_gof_constant(cfg, 50, 7);
    CHECK(c1 == c2);
    CHECK_THROWS_AS(calibrate_gof_constant(cfg, 10, 7), InvalidConfig);
}
