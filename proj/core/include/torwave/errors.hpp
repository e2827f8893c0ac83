#pragma once

#include <stdexcept>
#include <string>

namespace torwave {

/** Invalid argument / precondition violation. */
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/** Operation asked of a profile that lacks the needed geometry. */
class UnsupportedGeometry : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/** The discretized operator is singular (exact resonance). */
class SingularOperator : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/** Iterative solver ran out of iterations. Carries the best estimate
 * and the residual it reached, so callers can decide what to do. */
class SolverDidNotConverge : public std::runtime_error {
  public:
    SolverDidNotConverge(const std::string& what, double best, double residual)
        : std::runtime_error(what), best_estimate(best), residual(residual) {}
    double best_estimate;
    double residual;
};

}  // namespace torwave
