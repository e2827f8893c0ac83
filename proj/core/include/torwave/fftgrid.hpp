#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace torwave {

using Cplx = std::complex<double>;

/** RAII wrapper around a pair of 1D FFTW plans on an internal buffer. */
class Fft1D {
  public:
    explicit Fft1D(int n);
    ~Fft1D();
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const { return n_; }
    Cplx* data() { return buf_; }
    void forward();   // e^{-i2pi jk/n}, unnormalized
    void backward();  // e^{+i2pi jk/n}, unnormalized

  private:
    int n_;
    Cplx* buf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

/** Same for n x n 2D transforms. */
class Fft2D {
  public:
    explicit Fft2D(int n);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int size() const { return n_; }
    Cplx* data() { return buf_; }
    void forward();
    void backward();

  private:
    int n_;
    Cplx* buf_;
    void* plan_fwd_;
    void* plan_bwd_;
};

/** Smallest FFTW-friendly grid size >= m (factors 2,3,5,7). */
int next_fast_fft_size(int m);

/** Conversions between truncated Fourier coefficients and values on the
 * uniform grid z_j = -pi + 2pi j / N.
 *
 * Coefficient layout: modes k in [-K, K]^2, index (kx+K) + (2K+1)*(ky+K).
 * Values layout: grid index i + N*j for (x_i, y_j).
 *
 * Normalization: u(z) = sum_k c_k e^{i k.z}; the L^2 norm with measure
 * dz/(2pi)^2 equals the Euclidean norm of c, and equals the grid quadrature
 * sqrt(sum_j |u_j|^2 / N^2) for band-limited u.
 *
 * Not thread-safe per instance (owns scratch buffers); use one instance
 * per thread. */
class SpectralGrid2D {
  public:
    SpectralGrid2D(int K, int N = 0);  // N = 0 picks next_fast_fft_size(2K+1)

    int trunc() const { return K_; }
    int grid_n() const { return N_; }
    int n_modes() const { return (2 * K_ + 1) * (2 * K_ + 1); }
    int n_points() const { return N_ * N_; }
    double node(int i) const;  // -pi + 2pi i / N

    /** Coefficients -> grid values. */
    Eigen::VectorXcd to_grid(const Eigen::VectorXcd& coeffs) const;
    /** Grid values -> coefficients (truncation to [-K,K]^2). */
    Eigen::VectorXcd from_grid(const Eigen::VectorXcd& values) const;

    /** u |-> f*u on the truncated space, f given by real grid samples.
     * Realized as truncate( f .* synth(u) ); Hermitian for real f. */
    Eigen::VectorXcd multiply(const Eigen::VectorXd& f_samples,
                              const Eigen::VectorXcd& coeffs) const;

  private:
    int K_;
    int N_;
    std::unique_ptr<Fft2D> fft_;
};

/** 1D analogue on the full collocation band: n grid points x_j = -pi+2pi j/n,
 * modes k = -floor(n/2) .. ceil(n/2)-1. */
class SpectralGrid1D {
  public:
    explicit SpectralGrid1D(int n);

    int grid_n() const { return n_; }
    double node(int i) const;

    /** Mode wavenumber of FFT bin b (Nyquist assigned to -n/2). */
    int bin_wavenumber(int b) const;

    /** Spectral derivative of grid values (Nyquist mode zeroed). */
    Eigen::VectorXcd deriv(const Eigen::VectorXcd& values) const;
    /** Spectral second derivative (multiplier -k^2, Nyquist included). */
    Eigen::VectorXcd deriv2(const Eigen::VectorXcd& values) const;

    Eigen::VectorXcd fft(const Eigen::VectorXcd& values) const;      // /n
    Eigen::VectorXcd ifft(const Eigen::VectorXcd& coeffs) const;     // *1

  private:
    int n_;
    std::unique_ptr<Fft1D> fft_;
};

}  // namespace torwave
