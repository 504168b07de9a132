#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ldpq/density.hpp"
#include "ldpq/errors.hpp"
#include "ldpq/haar.hpp"
#include "test_support.hpp"

using namespace ldpq;

TEST_CASE("make_besov_density: delta 0 gives the uniform density") {
    BesovSpec spec;
    spec.delta = 0.0;
    spec.levels = {2};
    spec.signs = {1, 1, -1, 1};
    const auto d = make_besov_density(spec);
    for (double v : d.cells()) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("make_besov_density: single level, explicit signs") {
    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.5;
    spec.levels = {1};
    spec.signs = {1, 1};
    const auto d = make_besov_density(spec);
    REQUIRE(d.resolution() == 2);
    // cells 1 +- delta 2^{-m(s+1/2)} * 2^{m/2} = 1 +- delta 2^{-ms}
    const double dev = 0.5 * std::pow(2.0, -0.5);
    CHECK(d.cells()[0] == doctest::Approx(1.0 + dev));
    CHECK(d.cells()[1] == doctest::Approx(1.0 - dev));
    CHECK(d.cells()[2] == doctest::Approx(1.0 + dev));
    CHECK(d.cells()[3] == doctest::Approx(1.0 - dev));
}

TEST_CASE("make_besov_density rejects inadmissible amplitudes") {
    BesovSpec spec;
    spec.s = 0.1;
    spec.delta = 20.0;
    spec.levels = {1};
    spec.signs = {1, -1};
    try {
        make_besov_density(spec);
        FAIL("expected AmplitudeTooLarge");
    } catch (const AmplitudeTooLarge& e) {
        // bound = 1 / max|g| = 2^{m(s+1/2)} / 2^{m/2} = 2^{ms}
        CHECK(e.max_admissible_delta ==
              doctest::Approx(std::pow(2.0, 0.1)).epsilon(1e-12));
        // the reported bound is itself admissible
        BesovSpec ok = spec;
        ok.delta = e.max_admissible_delta;
        CHECK_NOTHROW(make_besov_density(ok));
    }
}

TEST_CASE("sampling the uniform density passes a KS check") {
    Rng rng(2024);
    const std::size_t n = 100000;
    auto xs = sample(DyadicDensity::uniform(), n, rng);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max(ks, std::max(std::fabs(xs[i] - lo), std::fabs(xs[i] - hi)));
    }
    // 1% asymptotic critical value: 1.628 / sqrt(n)
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampling respects support and seeds") {
    DyadicDensity point_mass(2, {4.0, 0.0, 0.0, 0.0});
    Rng rng(5);
    for (double x : sample(point_mass, 1000, rng)) CHECK(x < 0.25);

    Rng r1(77), r2(77);
    CHECK(sample(point_mass, 100, r1) == sample(point_mass, 100, r2));
}

TEST_CASE("quad_functional exact values") {
    CHECK(quad_functional(DyadicDensity::uniform()) == doctest::Approx(1.0));
    CHECK(quad_functional(DyadicDensity(1, {2.0, 0.0})) == doctest::Approx(2.0));

    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.5;
    spec.levels = {3};
    spec.sign_seed = 3;
    const auto d = make_besov_density(spec);
    // 1 + delta^2 2^{-2ms}
    CHECK(quad_functional(d) == doctest::Approx(1.03125).epsilon(1e-12));
}

TEST_CASE("linear_functional oracles") {
    Rng rng(8);
    const auto d = test::random_density(4, rng);
    CHECK(linear_functional(d, DyadicDensity::uniform()) == doctest::Approx(1.0));
    CHECK(linear_functional(d, d) == doctest::Approx(quad_functional(d)));

    const auto g = exact_coeffs(test::random_density(3, rng), 4);
    CHECK(linear_functional(DyadicDensity::uniform(), g) ==
          doctest::Approx(g.at(-1, 0)).epsilon(1e-12));

    // <g, f> via the coefficient table matches the cell-product integral
    const auto gd = test::random_density(3, rng);
    CHECK(linear_functional(d, exact_coeffs(gd, 5)) ==
          doctest::Approx(linear_functional(d, gd)).epsilon(1e-12));
}

TEST_CASE("eval_density") {
    CHECK(eval_density(DyadicDensity::uniform(), 0.42) == 1.0);
    const DyadicDensity d(1, {2.0, 0.0});
    CHECK(eval_density(d, 0.25) == 2.0);
    CHECK(eval_density(d, 0.75) == 0.0);
    CHECK(eval_density(d, 1.0) == 0.0);
}

TEST_CASE("serialization round trip") {
    Rng rng(31);
    const auto d = test::random_density(5, rng);
    std::stringstream ss;
    d.save(ss);
    const auto back = DyadicDensity::load(ss);
    CHECK(back.resolution() == d.resolution());
    for (std::size_t i = 0; i < d.cell_count(); ++i)
        CHECK(back.cells()[i] == d.cells()[i]);
}

TEST_CASE("quad_functional >= 1 with equality only at uniform") {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        BesovSpec spec;
        spec.s = 0.2 + 0.6 * rng.uniform();
        spec.delta = 0.4 * rng.uniform();
        spec.levels = {1 + static_cast<int>(rng.uniform() * 4.0)};
        spec.sign_seed = trial;
        const auto d = make_besov_density(spec);
        CHECK(quad_functional(d) >= 1.0 - 1e-12);
        const double m = spec.levels[0];
        CHECK(quad_functional(d) - 1.0 ==
              doctest::Approx(spec.delta * spec.delta *
                              std::pow(2.0, -2.0 * m * spec.s))
                  .epsilon(1e-10));
    }
    CHECK(quad_functional(DyadicDensity::uniform()) == doctest::Approx(1.0));
}

TEST_CASE("empirical cell frequencies converge") {
    Rng rng(606);
    BesovSpec spec;
    spec.s = 0.4;
    spec.delta = 0.6;
    spec.levels = {2};
    spec.sign_seed = 9;
    const auto d = make_besov_density(spec);
    const std::size_t n = 1000000;
    const auto xs = sample(d, n, rng);
    std::vector<std::size_t> counts(d.cell_count(), 0);
    for (double x : xs) {
        std::size_t c = static_cast<std::size_t>(x * d.cell_count());
        if (c >= d.cell_count()) c = d.cell_count() - 1;
        ++counts[c];
    }
    for (std::size_t c = 0; c < d.cell_count(); ++c) {
        const double p = d.cells()[c] / static_cast<double>(d.cell_count());
        const double freq = static_cast<double>(counts[c]) / n;
        const double tol = 5.0 * std::sqrt(p * (1.0 - p) / n);
        CHECK(std::fabs(freq - p) < tol);
    }
}
