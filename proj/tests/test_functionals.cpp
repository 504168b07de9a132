#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldpq/density.hpp"
#include "ldpq/errors.hpp"
#include "ldpq/functionals.hpp"
#include "test_support.hpp"

using namespace ldpq;

TEST_CASE("SmoothFunctional factories") {
    const auto q = SmoothFunctional::quadratic();
    CHECK(q.phi(3.0) == doctest::Approx(9.0));
    CHECK(q.dphi(3.0) == doctest::Approx(6.0));
    CHECK(q.ddphi(3.0) == doctest::Approx(2.0));
    CHECK(q.d3_bound == 0.0);

    const auto h = SmoothFunctional::entropy(0.25, 2.0);
    CHECK(h.phi(1.0) == doctest::Approx(0.0));
    CHECK(h.phi(2.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(h.dphi(1.0) == doctest::Approx(1.0));        // log t + 1
    CHECK(h.ddphi(0.5) == doctest::Approx(2.0));       // 1/t
    CHECK(h.d3_bound == doctest::Approx(1.0 / (0.25 * 0.25))); // 1/t^2 at f_min
    CHECK(h.f_min == 0.25);
}

TEST_CASE("private_linear_functional is unbiased") {
    Rng rng(17);
    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.6;
    spec.levels = {2};
    spec.sign_seed = 2;
    const auto d = make_besov_density(spec);
    const auto w = [](double x) { return std::cos(3.0 * x); };
    // truth = int w f by fine Riemann midpoint sum
    double truth = 0.0;
    const int grid = 200000;
    for (int i = 0; i < grid; ++i) {
        const double x = (i + 0.5) / grid;
        truth += w(x) * eval_density(d, x) / grid;
    }

    const int reps = 300;
    std::vector<double> ests;
    for (int r = 0; r < reps; ++r) {
        const auto xs = sample(d, 4000, rng);
        ests.push_back(private_linear_functional(xs, w, 1.0, 0.8, rng));
    }
    const auto ms = test::mean_se(ests);
    CHECK(std::fabs(ms.mean - truth) < 4.0 * ms.se);
}

TEST_CASE("private_linear_functional guards") {
    Rng rng(3);
    const std::vector<double> xs = {0.1, 0.2};
    const auto w = [](double x) { return 10.0 * x; };
    CHECK_THROWS_AS(private_linear_functional(xs, w, 1.0, 0.5, rng),
                    InvalidConfig);
    CHECK(private_linear_functional(xs, w, 0.0, 0.5, rng) == 0.0);
}

TEST_CASE("quadratic functional reduces to D(f)") {
    // With phi(t) = t^2 the expansion is exact: term (i) is -int fhat^2,
    // term (ii) has weight 0, term (iii) is the RR estimate of int 2 fhat f.
    // E[estimate] = D(f) - E||fhat - f||^2; with the stage-1 noise off the
    // second term is the 2^J/n histogram variance, well under the Monte
    // Carlo tolerance here.
    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.5;
    spec.levels = {2};
    spec.sign_seed = 6;
    const auto d = make_besov_density(spec);
    const double truth = quad_functional(d);

    SiConfig cfg;
    cfg.J = 3;
    cfg.alpha = 1.0;
    cfg.tau = 4.0;
    cfg.stage1_noise_scale = 0.0;

    Rng rng(414);
    const int reps = 400;
    std::vector<double> vals;
    for (int r = 0; r < reps; ++r) {
        const auto xs = sample(d, 3000, rng);
        const auto est =
            integral_functional_estimate(xs, SmoothFunctional::quadratic(),
                                         cfg, rng);
        CHECK(est.remainder_bound == 0.0);
        vals.push_back(est.value);
    }
    const auto ms = test::mean_se(vals);
    CHECK(std::fabs(ms.mean - truth) < 4.0 * ms.se);
    CHECK(ms.se < 0.1);
}

TEST_CASE("entropy estimate converges on a known density") {
    BesovSpec spec;
    spec.s = 0.5;
    spec.delta = 0.5;
    spec.levels = {1};
    spec.sign_seed = 1;
    const auto d = make_besov_density(spec);
    double truth = 0.0;
    for (double v : d.cells())
        truth += (v > 0.0 ? v * std::log(v) : 0.0) / d.cell_count();

    SiConfig cfg;
    cfg.J = 3;
    cfg.alpha = 1.0;
    cfg.tau = 4.0;
    cfg.stage1_noise_scale = 0.0;
    const auto phi = SmoothFunctional::entropy(0.25, 2.0);

    Rng rng(515);
    const int reps = 300;
    std::vector<double> vals;
    double rem = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto xs = sample(d, 6000, rng);
        const auto est = integral_functional_estimate(xs, phi, cfg, rng);
        vals.push_back(est.value);
        rem = est.remainder_bound;
    }
    const auto ms = test::mean_se(vals);
    CHECK(rem > 0.0);
    // noiseless stage 1 leaves only the cubic remainder, O(n^{-3/2}) here
    CHECK(std::fabs(ms.mean - truth) < 4.0 * ms.se + 0.002);
}

TEST_CASE("integral_functional_estimate input guards") {
    SiConfig cfg;
    cfg.tau = 4.0;
    Rng rng(9);
    const std::vector<double> tiny = {0.1, 0.2};
    CHECK_THROWS_AS(
        integral_functional_estimate(tiny, SmoothFunctional::quadratic(), cfg,
                                     rng),
        SampleTooSmall);
}
