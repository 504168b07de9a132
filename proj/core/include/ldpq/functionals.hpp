#ifndef LDPQ_FUNCTIONALS_HPP
#define LDPQ_FUNCTIONALS_HPP

#include <functional>
#include <span>
#include <vector>

#include "ldpq/channel_si.hpp"
#include "ldpq/rng.hpp"

namespace ldpq {

// T(f) = int phi(f) with phi three times continuously differentiable on the
// working range [f_min, f_max]. d3_bound bounds |phi'''| there; f_min > 0
// is required whenever phi' is unbounded at zero (entropy and friends).
struct SmoothFunctional {
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    std::function<double(double)> ddphi;
    double d3_bound = 0.0;
    double f_min = 0.0; // 0 means no lower clamp
    double f_max = 2.0;

    static SmoothFunctional quadratic(); // phi(t) = t^2
    static SmoothFunctional entropy(double f_min, double f_max); // t log t
};

// Unbiased alpha-private estimate of int w f via +-tau_w coth(alpha/2)-style
// randomized responses with conditional mean w(x). Throws InvalidConfig if
// some |w(x)| exceeds tau_w.
double private_linear_functional(std::span<const double> points,
                                 const std::function<double(double)>& w,
                                 double tau_w, double alpha, Rng& rng);

struct FunctionalEstimate {
    double value;
    double remainder_bound; // (1/6) ||phi'''|| * a-priori bound on int|f-fhat|^3
};

// Second-order expansion estimator: a 3-way split of the sample feeds
// (i) the exact plug-in integral of phi(fhat) - phi'(fhat) fhat
//     + (1/2) phi''(fhat) fhat^2,
// (ii) a private linear functional with weight phi'(fhat) - phi''(fhat) fhat,
// (iii) a private weighted-quadratic term with stage-2 weight
//      phi''(fhat) clamp(fhat, tau), halved.
// When phi.f_min > 0 the stage-1 estimate is projected pointwise onto
// [f_min, f_max] before any phi-derivative is evaluated.
FunctionalEstimate integral_functional_estimate(
    std::span<const double> points, const SmoothFunctional& phi,
    const SiConfig& cfg, Rng& rng);

} // namespace ldpq

#endif
