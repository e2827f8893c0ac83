#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "torwave/fit.hpp"

namespace torwave {

/** Data of the reduced 1D equation on T_x:
 *   -h^2 v'' - E v + i h W v + h^2 kappa W^{1/2} v' = r.
 * W, kappa, r are samples on the uniform n-point grid x_j = -pi + 2pi j/n.
 * theta is the Holder class parameter of W; delta = theta/(2 theta + 1) is
 * derived, never stored. */
struct ReducedProblem1D {
    double h = 0.0;
    double E = 0.0;
    Eigen::VectorXd W;
    Eigen::VectorXd kappa;
    Eigen::VectorXcd r;
    double theta = 0.0;
    double kappa_bound = 10.0;  // W^{1,inf} uniformity cap

    double delta() const { return theta / (2.0 * theta + 1.0); }
    int grid_n() const { return static_cast<int>(W.size()); }
};

enum class Regime { Elliptic, LowHyperbolic, HighHyperbolic };

struct RegimeTag {
    Regime regime;
    double c1;
    double delta;
};

/** Elliptic iff E <= c1 h^2; low hyperbolic iff c1 h^2 < E <= h^{1+delta};
 * high hyperbolic otherwise. Boundaries resolve as written. */
RegimeTag classify_regime(double h, double E, double c1, double delta);

const char* regime_name(Regime r);

struct Reduced1DSolution {
    Eigen::VectorXcd v;
    double solve_residual = 0.0;  // ||T v - r|| / ||r||
};

/** Dense Fourier-collocation solve of the reduced equation. Requires
 * grid_n >= 512; throws SingularOperator on (near-)exact resonance. */
Reduced1DSolution solve_reduced(const ReducedProblem1D& p);

/** ||v|| / ( h^{-2-delta} ||r|| + h^{-(3 theta + 1)/(2 (2 theta + 1))}
 * ||W^{1/2} v|| ); the uniform estimate holds iff this stays bounded. */
double uniform_estimate_gain(const ReducedProblem1D& p,
                             const Eigen::VectorXcd& v);

/** Shifted operator family sharing one Hessenberg reduction, so sigma_min
 * over a shift grid costs O(n^2) per shift after one O(n^3) setup.
 * Unitarily exact: the values equal those of the dense collocation matrix.
 * Even W (and no drift) splits into two half-size parity blocks. */
class Shifted1DFamily {
  public:
    /** B = -d_x^2 + i h^{-1} W; shift = lambda^2. */
    static Shifted1DFamily lambda_form(double h, const Eigen::VectorXd& w);
    /** B = -h^2 d_x^2 + i h W + h^2 kappa W^{1/2} d_x; shift = E. */
    static Shifted1DFamily reduced_form(double h, const Eigen::VectorXd& w,
                                        const Eigen::VectorXd& kappa);
    double sigma_min(double shift, double rtol = 1e-8) const;
    int grid_n() const { return n_; }
    int n_blocks() const { return static_cast<int>(blocks_.size()); }

  private:
    int n_ = 0;
    std::vector<Eigen::MatrixXcd> blocks_;
};

/** ||(-d_x^2 - lambda^2 + i h^{-1} W)^{-1}|| on the n-point collocation
 * grid: 1/sigma_min of the dense collocation matrix. */
double resolvent_1d_norm(double h, double lambda, const Eigen::VectorXd& w,
                         double rtol = 1e-8);

/** Solve -v'' - lambda^2 v + i h^{-1} W v = r (the lambda form). */
Eigen::VectorXcd solve_lambda_form(double h, double lambda,
                                   const Eigen::VectorXd& w,
                                   const Eigen::VectorXcd& r);

/** Both sides of the weighted energy identity
 *   int w |h v'|^2 + int (-h^2 w''/2 - E w) |v|^2
 *     - h^2/2 int (w kappa W^{1/2})' |v|^2 = Re int w r conj(v),
 * evaluated by spectral quadrature; returns |LHS - RHS|/(|LHS|+|RHS|+eps). */
double weighted_identity_residual(const ReducedProblem1D& p,
                                  const Eigen::VectorXcd& v,
                                  const Eigen::VectorXd& w);

/** Piecewise Morawetz weight system: V0, the C^2 cutoff chi_h, the
 * mass-balanced step weight Psi_h (integral exactly zero by choice of M),
 * its periodic primitive Phi_h with Phi_h(0) = 0, and Theta = Psi 1_{Psi>0}.
 * Shell widths are min(2 pi h^delta, interval/4): the nominal 2 pi h^delta
 * does not fit inside desk-scale intervals. */
struct MorawetzWeights {
    Eigen::VectorXd V0, chi, Psi, Phi, Theta;
    double M = 0.0;
    double integral_Psi = 0.0;  // exact piecewise integral (not quadrature)
    double sup_Phi = 0.0;
    std::vector<double> shell_widths;
};

MorawetzWeights build_morawetz_weights(
    const std::vector<std::pair<double, double>>& intervals, double h,
    double delta, std::vector<double> epsilons, int grid_n);

struct MorawetzCheck {
    double lhs = 0.0;  // int Theta e0
    double rhs = 0.0;  // h^{-1}|int Phi W v1 conj(v1')| + |Re int Phi conj(v1') rtilde|
    double ratio = 0.0;
};

/** Evaluate the Morawetz-type inequality on a solved lambda-form instance. */
MorawetzCheck morawetz_check(const MorawetzWeights& mw, double h,
                             double lambda, const Eigen::VectorXd& w,
                             const Eigen::VectorXcd& v,
                             const Eigen::VectorXcd& r);

/** ||v|| / ( lambda^{-1}||f1|| + ||f2||_{H^-1} + ||v||_{L^2(I)} );
 * the H^{-1} norm uses Fourier weights (1+k^2)^{-1/2}. */
double geometric_control_ratio(const Eigen::VectorXcd& v, double lambda,
                               const Eigen::VectorXcd& f1,
                               const Eigen::VectorXcd& f2,
                               std::pair<double, double> interval);

}  // namespace torwave
