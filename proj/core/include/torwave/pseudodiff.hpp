#pragma once

#include <memory>

#include <Eigen/Dense>

#include "torwave/averaging.hpp"
#include "torwave/damping.hpp"
#include "torwave/fourier.hpp"

namespace torwave {

/** Smooth even frequency cutoff: 1 on |eta -+ 1| <= 1/4, supported on
 * |eta -+ 1| <= 1/2, built from the exp-based C^inf transition. */
class CutoffPsi1 {
  public:
    double operator()(double eta) const;
};

/** b(eta) = -psi1(eta)/(4 eta); zero wherever psi1 vanishes, so the formula
 * never divides by a small eta (supp psi1 keeps |eta| >= 1/2). */
double normal_form_multiplier(double eta);

/** The generator G_h = b(hD_y) A + A b(hD_y) on the truncated basis, with
 * A(x,y) the primitive of a - A(a) in y. Self-adjoint; uniformly bounded
 * in h. */
class NormalFormGenerator {
  public:
    int trunc() const { return K_; }
    double h() const { return h_; }
    const SpectralGrid2D& grid() const { return *grid_; }
    std::shared_ptr<SpectralGrid2D> shared_grid() const { return grid_; }
    const Eigen::VectorXd& a_samples() const { return a_samples_; }
    const Eigen::VectorXd& primitive_samples() const { return A_samples_; }
    const Eigen::VectorXd& averaged_samples() const { return W_samples_; }

    FourierField2D apply(const FourierField2D& u) const;
    /** Operator-norm estimate (Lanczos on the self-adjoint generator). */
    double op_norm() const;
    /** Dense matrix on the truncated basis; intended for K <= 35. */
    Eigen::MatrixXcd dense() const;

  private:
    friend NormalFormGenerator build_generator(const DampingProfile&, double,
                                               int);
    int K_ = 0;
    double h_ = 0.0;
    std::shared_ptr<SpectralGrid2D> grid_;
    Eigen::VectorXd b_diag_;      // b(h k_y) per mode
    Eigen::VectorXd a_samples_;   // damping on the operator grid
    Eigen::VectorXd A_samples_;   // primitive on the operator grid
    Eigen::VectorXd W_samples_;   // averaged damping, expanded to the grid
    mutable double op_norm_ = -1.0;
};

/** Assemble G_h for the damping a at parameters (h, K). Requires h in (0,1)
 * and K >= 2/h so the modes h k_y ~ +-1 exist on the grid. */
NormalFormGenerator build_generator(const DampingProfile& a, double h, int K);

/** Dense matrix exponential by Pade scaling-and-squaring.
 * Throws InvalidInput on non-finite entries. */
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m);

/** e^{s G} v by the convergent power series (the generator is bounded, so
 * plain Taylor summation converges fast); tol is on the series tail. */
FourierField2D apply_exponential(const NormalFormGenerator& g, double s,
                                 const FourierField2D& v, double tol = 1e-15);

/** Deterministic probe microlocalized in {|h k_y - 1| <= 1/8,
 * sqrt(h) |k_x| <= 1}, unit norm. */
FourierField2D make_microlocal_probe(double h, int K);

/** True when the coefficients live inside the probe window (relative mass
 * outside below rel_tol). */
bool is_microlocalized(const FourierField2D& u, double rel_tol = 1e-13);

/** Residual of the first-averaging conjugation on a microlocalized probe w:
 * || e^{G}(P_h + i h a)e^{-G} w - (P_h + i h A(a) - [h^2 D_x^2, G]) w ||.
 * Exponentials are applied by power series; for K <= 35 the dense route is
 * available through matrix_exponential and cross-checked in tests. */
double conjugation_residual(const DampingProfile& a, double h, int K,
                            const FourierField2D& probe);

}  // namespace torwave
