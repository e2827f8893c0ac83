#pragma once

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace torwave {

using ApplyFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/** Largest eigenvalue of a Hermitian operator by Lanczos with full
 * reorthogonalization; converged Ritz vector optionally returned. */
struct LanczosResult {
    double value = 0.0;
    double ritz_residual = 0.0;  // |beta_m * y_m|, a bound on the error
    int iterations = 0;
    bool converged = false;
    Eigen::VectorXcd vector;  // empty unless requested
};

LanczosResult lanczos_largest(const ApplyFn& apply, int dim, double rtol,
                              int max_iter, std::uint64_t seed,
                              bool want_vector = false);

/** Preconditioned conjugate gradient for Hermitian positive definite
 * operators; `precond` applies an approximate inverse. */
struct PcgResult {
    Eigen::VectorXcd x;
    double rel_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

PcgResult pcg_solve(const ApplyFn& apply, const ApplyFn& precond,
                    const Eigen::VectorXcd& b, double rtol, int max_iter,
                    const Eigen::VectorXcd* x0 = nullptr);

}  // namespace torwave
