#pragma once

#include <stdexcept>
#include <string>

namespace ranknorm {

// Thrown when a model parameterization has no usable density, e.g. rho == 1
// makes the idiosyncratic variance of every component collapse to zero.
class DegenerateModelError : public std::domain_error {
public:
    explicit DegenerateModelError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when a computed quantity violates a numerical sanity bound (for
// example a conditional variance more negative than the clamping tolerance),
// indicating the quadrature grid is too coarse for the requested problem.
class NumericalFailureError : public std::runtime_error {
public:
    explicit NumericalFailureError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the rejection sampler when the proposal budget is exhausted
// before the requested number of accepted draws, reporting the observed rate.
class InsufficientAcceptanceError : public std::runtime_error {
public:
    InsufficientAcceptanceError(const std::string& what, double observed_rate)
        : std::runtime_error(what), observed_rate_(observed_rate) {}
    double observed_rate() const { return observed_rate_; }

private:
    double observed_rate_;
};

// Thrown when a covariance matrix fails its SPD factorization.
class SingularCovarianceError : public std::runtime_error {
public:
    explicit SingularCovarianceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ranknorm
