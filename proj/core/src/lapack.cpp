#include "torwave/lapack.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cmath>
#include <random>

#include "torwave/errors.hpp"

namespace torwave::lapack {

using Cplx = std::complex<double>;

VectorXd singular_values(MatrixXcd a) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    VectorXd s(std::min(m, n));
    const int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m,
                                    s.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("zgesdd failed, info != 0");
    return s;
}

double smallest_singular_value(const MatrixXcd& a) {
    const VectorXd s = singular_values(a);
    return s[s.size() - 1];
}

VectorXcd eigenvalues(MatrixXcd a) {
    const int n = static_cast<int>(a.rows());
    VectorXcd w(n);
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n,
                                   w.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("zgeev failed, info != 0");
    return w;
}

void eigensystem(MatrixXcd a, VectorXcd& values, MatrixXcd& vectors) {
    const int n = static_cast<int>(a.rows());
    values.resize(n);
    vectors.resize(n, n);
    const int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n,
                                   values.data(), nullptr, 1, vectors.data(), n);
    if (info != 0) throw std::runtime_error("zgeev failed, info != 0");
}

Lu::Lu(MatrixXcd a) : lu_(std::move(a)), piv_(lu_.rows()) {
    const int n = static_cast<int>(lu_.rows());
    const int info =
        LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, piv_.data());
    if (info > 0) throw SingularOperator("LU: exactly singular matrix");
    if (info < 0) throw std::runtime_error("zgetrf failed");
}

VectorXcd Lu::solve(const VectorXcd& b) const {
    VectorXcd x = b;
    const int n = size();
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n, piv_.data(),
                   x.data(), n);
    return x;
}

VectorXcd Lu::solve_adjoint(const VectorXcd& b) const {
    VectorXcd x = b;
    const int n = size();
    LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'C', n, 1, lu_.data(), n, piv_.data(),
                   x.data(), n);
    return x;
}

double Lu::rcond(double anorm_1) const {
    const int n = size();
    double rc = 0.0;
    LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, lu_.data(), n, anorm_1, &rc);
    return rc;
}

MatrixXcd hessenberg_form(MatrixXcd a) {
    const int n = static_cast<int>(a.rows());
    std::vector<Cplx> tau(std::max(1, n - 1));
    const int info =
        LAPACKE_zgehrd(LAPACK_COL_MAJOR, n, 1, n, a.data(), n, tau.data());
    if (info != 0) throw std::runtime_error("zgehrd failed");
    // Zero the reflector storage below the first subdiagonal.
    for (int j = 0; j < n; ++j)
        for (int i = j + 2; i < n; ++i) a(i, j) = Cplx(0, 0);
    return a;
}

namespace {

struct Givens {
    double c;
    Cplx s;
};

// G = [[c, s], [-conj(s), c]] with c real, chosen so G [a; b] = [r; 0].
Givens make_givens(Cplx a, Cplx b) {
    if (b == Cplx(0, 0)) return {1.0, Cplx(0, 0)};
    if (a == Cplx(0, 0)) return {0.0, std::conj(b) / std::abs(b)};
    const double na = std::abs(a);
    const double d = std::hypot(na, std::abs(b));
    return {na / d, (a / na) * std::conj(b) / d};
}

}  // namespace

double hessenberg_sigma_min(const MatrixXcd& h, Cplx shift, double rtol,
                            int max_lanczos) {
    const int n = static_cast<int>(h.rows());
    MatrixXcd r = h;
    r.diagonal().array() -= shift;

    // QR of the shifted Hessenberg matrix by Givens rotations.
    std::vector<Givens> rot(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const Givens g = make_givens(r(i, i), r(i + 1, i));
        rot[i] = g;
        for (int j = i; j < n; ++j) {
            const Cplx t0 = r(i, j), t1 = r(i + 1, j);
            r(i, j) = g.c * t0 + g.s * t1;
            r(i + 1, j) = -std::conj(g.s) * t0 + g.c * t1;
        }
    }
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(r(i, i));
        rmin = std::min(rmin, d);
        rmax = std::max(rmax, d);
    }
    if (rmin == 0.0 || rmin < rmax * 1e-300)
        throw SingularOperator("shifted operator is singular");

    auto apply_qstar = [&](VectorXcd& v) {
        for (int i = 0; i + 1 < n; ++i) {
            const Cplx t0 = v[i], t1 = v[i + 1];
            v[i] = rot[i].c * t0 + rot[i].s * t1;
            v[i + 1] = -std::conj(rot[i].s) * t0 + rot[i].c * t1;
        }
    };
    auto apply_q = [&](VectorXcd& v) {
        for (int i = n - 2; i >= 0; --i) {
            const Cplx t0 = v[i], t1 = v[i + 1];
            v[i] = rot[i].c * t0 - rot[i].s * t1;
            v[i + 1] = std::conj(rot[i].s) * t0 + rot[i].c * t1;
        }
    };
    auto back_solve = [&](VectorXcd& v) {  // R x = v
        for (int i = n - 1; i >= 0; --i) {
            Cplx acc = v[i];
            for (int j = i + 1; j < n; ++j) acc -= r(i, j) * v[j];
            v[i] = acc / r(i, i);
        }
    };
    auto forward_solve_adj = [&](VectorXcd& v) {  // R^* x = v
        for (int i = 0; i < n; ++i) {
            Cplx acc = v[i];
            for (int j = 0; j < i; ++j) acc -= std::conj(r(j, i)) * v[j];
            v[i] = acc / std::conj(r(i, i));
        }
    };
    // w -> (H-s)^{-1} (H-s)^{-*} w, Hermitian positive definite.
    auto apply_inv_normal = [&](const VectorXcd& w) {
        VectorXcd v = w;
        forward_solve_adj(v);
        apply_q(v);
        apply_qstar(v);
        back_solve(v);
        return v;
    };

    // Lanczos with full reorthogonalization for the largest eigenvalue.
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    VectorXcd q0(n);
    for (int i = 0; i < n; ++i) q0[i] = Cplx(gauss(rng), gauss(rng));
    q0.normalize();

    std::vector<VectorXcd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(q0);
    double lambda_prev = 0.0;
    double lambda = 0.0;
    for (int j = 0; j < max_lanczos; ++j) {
        VectorXcd w = apply_inv_normal(basis[j]);
        const double a = std::real(basis[j].dot(w));
        alpha.push_back(a);
        w -= a * basis[j];
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        for (const auto& q : basis) w -= q.dot(w) * q;  // reorthogonalize
        const double b = w.norm();

        const int m = j + 1;
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
        for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        lambda = es.eigenvalues().maxCoeff();
        if (j >= 2 && std::abs(lambda - lambda_prev) < 0.25 * rtol * lambda)
            break;
        lambda_prev = lambda;
        if (b < 1e-14 * std::sqrt(lambda)) break;  // invariant subspace
        beta.push_back(b);
        basis.push_back(w / b);
    }
    return 1.0 / std::sqrt(lambda);
}

}  // namespace torwave::lapack
