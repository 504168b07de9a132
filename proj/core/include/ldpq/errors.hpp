#ifndef LDPQ_ERRORS_HPP
#define LDPQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ldpq {

struct InvalidIndex : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when a Besov perturbation would make the density negative; carries
// the largest admissible amplitude for the requested spec.
struct AmplitudeTooLarge : std::invalid_argument {
    AmplitudeTooLarge(const std::string& msg, double max_delta)
        : std::invalid_argument(msg), max_admissible_delta(max_delta) {}
    double max_admissible_delta;
};

struct InsufficientBudget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SampleTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace ldpq

#endif
