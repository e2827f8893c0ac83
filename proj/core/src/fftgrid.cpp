#include "torwave/fftgrid.hpp"

#include <fftw3.h>

#include <mutex>

#include "torwave/errors.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

namespace {
// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex g_plan_mutex;
}  // namespace

Fft1D::Fft1D(int n) : n_(n) {
    if (n < 1) throw InvalidInput("Fft1D: n must be positive");
    buf_ = reinterpret_cast<Cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    plan_fwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_),
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft1D::~Fft1D() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void Fft1D::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void Fft1D::backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

Fft2D::Fft2D(int n) : n_(n) {
    if (n < 1) throw InvalidInput("Fft2D: n must be positive");
    buf_ = reinterpret_cast<Cplx*>(fftw_malloc(sizeof(fftw_complex) * n * n));
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    // Values indexed i + N*j with x fastest; FFTW's row-major dims are (n1, n0)
    // with the last dimension contiguous, so pass (ny, nx) = (n, n).
    plan_fwd_ = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(buf_),
                                 reinterpret_cast<fftw_complex*>(buf_),
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(buf_);
}

void Fft2D::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void Fft2D::backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

int next_fast_fft_size(int m) {
    auto smooth = [](int n) {
        for (int p : {2, 3, 5, 7})
            while (n % p == 0) n /= p;
        return n == 1;
    };
    int n = m;
    while (!smooth(n)) ++n;
    return n;
}

SpectralGrid2D::SpectralGrid2D(int K, int N) : K_(K) {
    if (K < 0) throw InvalidInput("SpectralGrid2D: K must be >= 0");
    N_ = N > 0 ? N : next_fast_fft_size(2 * K + 1);
    if (N_ < 2 * K + 1)
        throw InvalidInput("SpectralGrid2D: N must be >= 2K+1");
    fft_ = std::make_unique<Fft2D>(N_);
}

double SpectralGrid2D::node(int i) const { return -kPi + kTwoPi * i / N_; }

// Grid nodes start at -pi, so mode k carries the phase e^{-i pi k} = (-1)^k
// relative to the plain DFT.
Eigen::VectorXcd SpectralGrid2D::to_grid(const Eigen::VectorXcd& coeffs) const {
    const int m = 2 * K_ + 1;
    if (coeffs.size() != m * m)
        throw InvalidInput("to_grid: coefficient size mismatch");
    Cplx* b = fft_->data();
    std::fill(b, b + N_ * N_, Cplx(0.0, 0.0));
    for (int ky = -K_; ky <= K_; ++ky) {
        const int by = ((ky % N_) + N_) % N_;
        for (int kx = -K_; kx <= K_; ++kx) {
            const int bx = ((kx % N_) + N_) % N_;
            const double sgn = ((kx + ky) & 1) ? -1.0 : 1.0;
            b[bx + N_ * by] = sgn * coeffs[(kx + K_) + m * (ky + K_)];
        }
    }
    fft_->backward();
    return Eigen::Map<const Eigen::VectorXcd>(b, N_ * N_);
}

Eigen::VectorXcd SpectralGrid2D::from_grid(const Eigen::VectorXcd& values) const {
    if (values.size() != N_ * N_)
        throw InvalidInput("from_grid: value size mismatch");
    Cplx* b = fft_->data();
    std::copy(values.data(), values.data() + N_ * N_, b);
    fft_->forward();
    const int m = 2 * K_ + 1;
    const double inv = 1.0 / (static_cast<double>(N_) * N_);
    Eigen::VectorXcd coeffs(m * m);
    for (int ky = -K_; ky <= K_; ++ky) {
        const int by = ((ky % N_) + N_) % N_;
        for (int kx = -K_; kx <= K_; ++kx) {
            const int bx = ((kx % N_) + N_) % N_;
            const double sgn = ((kx + ky) & 1) ? -1.0 : 1.0;
            coeffs[(kx + K_) + m * (ky + K_)] = sgn * inv * b[bx + N_ * by];
        }
    }
    return coeffs;
}

Eigen::VectorXcd SpectralGrid2D::multiply(const Eigen::VectorXd& f_samples,
                                          const Eigen::VectorXcd& coeffs) const {
    if (f_samples.size() != N_ * N_)
        throw InvalidInput("multiply: sample size mismatch");
    Eigen::VectorXcd vals = to_grid(coeffs);
    vals.array() *= f_samples.array();
    return from_grid(vals);
}

SpectralGrid1D::SpectralGrid1D(int n) : n_(n) {
    if (n < 2) throw InvalidInput("SpectralGrid1D: n must be >= 2");
    fft_ = std::make_unique<Fft1D>(n);
}

double SpectralGrid1D::node(int i) const { return -kPi + kTwoPi * i / n_; }

int SpectralGrid1D::bin_wavenumber(int b) const {
    return b <= (n_ - 1) / 2 ? b : b - n_;
}

Eigen::VectorXcd SpectralGrid1D::fft(const Eigen::VectorXcd& values) const {
    if (values.size() != n_) throw InvalidInput("fft: size mismatch");
    Cplx* b = fft_->data();
    std::copy(values.data(), values.data() + n_, b);
    fft_->forward();
    Eigen::VectorXcd out = Eigen::Map<const Eigen::VectorXcd>(b, n_);
    out /= static_cast<double>(n_);
    return out;
}

Eigen::VectorXcd SpectralGrid1D::ifft(const Eigen::VectorXcd& coeffs) const {
    if (coeffs.size() != n_) throw InvalidInput("ifft: size mismatch");
    Cplx* b = fft_->data();
    std::copy(coeffs.data(), coeffs.data() + n_, b);
    fft_->backward();
    return Eigen::Map<const Eigen::VectorXcd>(b, n_);
}

Eigen::VectorXcd SpectralGrid1D::deriv(const Eigen::VectorXcd& values) const {
    Eigen::VectorXcd c = fft(values);
    for (int b = 0; b < n_; ++b) {
        const int k = bin_wavenumber(b);
        // For even n the Nyquist mode has no well-defined first derivative;
        // the standard choice is to zero it, keeping D skew-adjoint.
        if (2 * k == -n_)
            c[b] = 0.0;
        else
            c[b] *= Cplx(0.0, static_cast<double>(k));
    }
    return ifft(c);
}

Eigen::VectorXcd SpectralGrid1D::deriv2(const Eigen::VectorXcd& values) const {
    Eigen::VectorXcd c = fft(values);
    for (int b = 0; b < n_; ++b) {
        const double k = static_cast<double>(bin_wavenumber(b));
        c[b] *= -k * k;
    }
    return ifft(c);
}

}  // namespace torwave
