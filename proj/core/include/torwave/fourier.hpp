#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "torwave/fftgrid.hpp"

namespace torwave {

/** Truncated 2D Fourier representation of an L^2(T^2) function: modes
 * |k_x| <= K, |k_y| <= K, with the semiclassical parameter h attached for
 * operator context. Parseval: the L^2 norm is the Euclidean coefficient
 * norm. */
struct FourierField2D {
    int K = 0;
    double h = 1.0;
    Eigen::VectorXcd coeffs;

    static FourierField2D zero(int K, double h) {
        FourierField2D f;
        f.K = K;
        f.h = h;
        f.coeffs = Eigen::VectorXcd::Zero((2 * K + 1) * (2 * K + 1));
        return f;
    }
    int n_modes() const { return (2 * K + 1) * (2 * K + 1); }
    int index(int kx, int ky) const {
        return (kx + K) + (2 * K + 1) * (ky + K);
    }
    Cplx& at(int kx, int ky) { return coeffs[index(kx, ky)]; }
    Cplx at(int kx, int ky) const { return coeffs[index(kx, ky)]; }
    double norm() const { return coeffs.norm(); }
    /** H^1 seminorm: sum |k|^2 |c_k|^2. */
    double grad_norm_sq() const;
};

/** Shared transform context for operators at one (K, N) resolution. */
class FourierWorkspace2D {
  public:
    explicit FourierWorkspace2D(int K, int N = 0)
        : grid_(std::make_shared<SpectralGrid2D>(K, N)) {}
    const SpectralGrid2D& grid() const { return *grid_; }
    std::shared_ptr<SpectralGrid2D> shared_grid() const { return grid_; }

  private:
    std::shared_ptr<SpectralGrid2D> grid_;
};

/** Sample a function of (x, y) on the N x N operator grid (x fastest). */
Eigen::VectorXd sample_on_grid(const std::function<double(double, double)>& f,
                               const SpectralGrid2D& grid);

enum class Axis { X, Y };

/** Diagonal Fourier multiplier phi(h k_axis). */
struct DiagonalMultiplier2D {
    int K = 0;
    Eigen::VectorXd diag;  // one entry per mode
    FourierField2D apply(const FourierField2D& u) const;
};

DiagonalMultiplier2D fourier_multiplier(const std::function<double(double)>& phi,
                                        Axis axis, double h, int K);

/** u |-> f u realized by inverse transform, pointwise multiply, forward
 * transform; Hermitian (and PSD for f >= 0) on the truncated space. */
class MultiplicationOperator2D {
  public:
    MultiplicationOperator2D(std::shared_ptr<SpectralGrid2D> grid,
                             Eigen::VectorXd samples);
    FourierField2D apply(const FourierField2D& u) const;
    const Eigen::VectorXd& samples() const { return samples_; }
    const SpectralGrid2D& grid() const { return *grid_; }

  private:
    std::shared_ptr<SpectralGrid2D> grid_;
    Eigen::VectorXd samples_;
};

/** Dense matrix of a linear operator on the truncated basis, built by
 * applying it to coordinate vectors. For testing and small-K work. */
Eigen::MatrixXcd assemble_dense(
    const std::function<FourierField2D(const FourierField2D&)>& op, int K,
    double h);

}  // namespace torwave
