#include "torwave/krylov.hpp"

#include <random>
#include <vector>

#include "torwave/errors.hpp"

namespace torwave {

LanczosResult lanczos_largest(const ApplyFn& apply, int dim, double rtol,
                              int max_iter, std::uint64_t seed,
                              bool want_vector) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd q(dim);
    for (int i = 0; i < dim; ++i) q[i] = {gauss(rng), gauss(rng)};
    q.normalize();

    std::vector<Eigen::VectorXcd> basis{q};
    std::vector<double> alpha, beta;
    LanczosResult res;
    double prev = 0.0;
    Eigen::VectorXd ritz_weights;
    for (int j = 0; j < max_iter; ++j) {
        Eigen::VectorXcd w = apply(basis[j]);
        const double a = std::real(basis[j].dot(w));
        alpha.push_back(a);
        w -= a * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (const auto& qq : basis) w -= qq.dot(w) * qq;
        const double b = w.norm();

        const int m = j + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        int imax = 0;
        es.eigenvalues().maxCoeff(&imax);
        res.value = es.eigenvalues()[imax];
        ritz_weights = es.eigenvectors().col(imax);
        res.ritz_residual = b * std::abs(ritz_weights[m - 1]);
        res.iterations = m;
        if (j >= 1 && std::abs(res.value - prev) <= rtol * std::abs(res.value) &&
            res.ritz_residual <= 10 * rtol * std::abs(res.value)) {
            res.converged = true;
            break;
        }
        prev = res.value;
        if (b <= 1e-14 * std::abs(res.value)) {  // invariant subspace
            res.converged = true;
            break;
        }
        beta.push_back(b);
        basis.push_back(w / b);
    }
    if (want_vector) {
        res.vector = Eigen::VectorXcd::Zero(dim);
        for (int i = 0; i < res.iterations && i < (int)basis.size(); ++i)
            res.vector += ritz_weights[i] * basis[i];
        res.vector.normalize();
    }
    return res;
}

PcgResult pcg_solve(const ApplyFn& apply, const ApplyFn& precond,
                    const Eigen::VectorXcd& b, double rtol, int max_iter,
                    const Eigen::VectorXcd* x0) {
    PcgResult res;
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        res.x = Eigen::VectorXcd::Zero(b.size());
        res.converged = true;
        return res;
    }
    Eigen::VectorXcd x =
        x0 ? *x0 : Eigen::VectorXcd::Zero(b.size()).eval();
    Eigen::VectorXcd r = b - apply(x);
    Eigen::VectorXcd z = precond(r);
    Eigen::VectorXcd p = z;
    std::complex<double> rz = r.dot(z);
    for (int it = 0; it < max_iter; ++it) {
        res.rel_residual = r.norm() / bnorm;
        if (res.rel_residual <= rtol) {
            res.converged = true;
            break;
        }
        const Eigen::VectorXcd ap = apply(p);
        const std::complex<double> alpha = rz / p.dot(ap);
        x += alpha * p;
        r -= alpha * ap;
        z = precond(r);
        const std::complex<double> rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
        res.iterations = it + 1;
    }
    res.rel_residual = r.norm() / bnorm;
    if (res.rel_residual <= rtol) res.converged = true;
    res.x = std::move(x);
    return res;
}

}  // namespace torwave
