#include "torwave/fourier.hpp"

#include "torwave/errors.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

double FourierField2D::grad_norm_sq() const {
    double acc = 0.0;
    for (int ky = -K; ky <= K; ++ky)
        for (int kx = -K; kx <= K; ++kx)
            acc += (double(kx) * kx + double(ky) * ky) *
                   std::norm(coeffs[index(kx, ky)]);
    return acc;
}

Eigen::VectorXd sample_on_grid(const std::function<double(double, double)>& f,
                               const SpectralGrid2D& grid) {
    const int n = grid.grid_n();
    Eigen::VectorXd out(n * n);
    for (int j = 0; j < n; ++j) {
        const double y = grid.node(j);
        for (int i = 0; i < n; ++i) out[i + n * j] = f(grid.node(i), y);
    }
    return out;
}

FourierField2D DiagonalMultiplier2D::apply(const FourierField2D& u) const {
    if (u.K != K) throw InvalidInput("multiplier: truncation mismatch");
    FourierField2D out = u;
    out.coeffs.array() *= diag.array();
    return out;
}

DiagonalMultiplier2D fourier_multiplier(const std::function<double(double)>& phi,
                                        Axis axis, double h, int K) {
    if (K < 4) throw InvalidInput("fourier_multiplier: K < 4");
    DiagonalMultiplier2D m;
    m.K = K;
    m.diag.resize((2 * K + 1) * (2 * K + 1));
    for (int ky = -K; ky <= K; ++ky)
        for (int kx = -K; kx <= K; ++kx)
            m.diag[(kx + K) + (2 * K + 1) * (ky + K)] =
                phi(h * (axis == Axis::X ? kx : ky));
    return m;
}

MultiplicationOperator2D::MultiplicationOperator2D(
    std::shared_ptr<SpectralGrid2D> grid, Eigen::VectorXd samples)
    : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_->n_points())
        throw InvalidInput("multiplication: sample grid mismatch");
}

FourierField2D MultiplicationOperator2D::apply(const FourierField2D& u) const {
    if (u.K != grid_->trunc())
        throw InvalidInput("multiplication: truncation mismatch");
    FourierField2D out = u;
    out.coeffs = grid_->multiply(samples_, u.coeffs);
    return out;
}

Eigen::MatrixXcd assemble_dense(
    const std::function<FourierField2D(const FourierField2D&)>& op, int K,
    double h) {
    const int n = (2 * K + 1) * (2 * K + 1);
    Eigen::MatrixXcd m(n, n);
    FourierField2D e = FourierField2D::zero(K, h);
    for (int j = 0; j < n; ++j) {
        e.coeffs.setZero();
        e.coeffs[j] = 1.0;
        m.col(j) = op(e).coeffs;
    }
    return m;
}

}  // namespace torwave
