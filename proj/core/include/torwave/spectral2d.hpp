#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "torwave/damping.hpp"
#include "torwave/fit.hpp"
#include "torwave/fourier.hpp"

namespace torwave {

/** The stationary operator P_h + i h a = -h^2 Lap - 1 + i h a on the
 * truncated Fourier basis: diagonal multiplier plus grid multiplication,
 * applied in O(K^2 log K). */
class StationaryOperator2D {
  public:
    StationaryOperator2D(const DampingProfile& a, double h, int K);

    double h() const { return h_; }
    int trunc() const { return K_; }
    const DampingProfile& damping() const { return damping_; }
    const SpectralGrid2D& grid() const { return *grid_; }
    const Eigen::VectorXd& a_samples() const { return a_samples_; }
    /** Multiplier h^2|k|^2 - 1 per mode. */
    const Eigen::VectorXd& symbol_diag() const { return diag_; }

    FourierField2D apply(const FourierField2D& u) const;
    FourierField2D apply_adjoint(const FourierField2D& u) const;
    Eigen::VectorXcd apply_vec(const Eigen::VectorXcd& c) const;
    Eigen::VectorXcd apply_adjoint_vec(const Eigen::VectorXcd& c) const;

    Eigen::MatrixXcd dense() const;  // for small K (tests, dense SVD)

  private:
    double h_;
    int K_;
    DampingProfile damping_;
    std::shared_ptr<SpectralGrid2D> grid_;
    Eigen::VectorXd a_samples_;
    Eigen::VectorXd diag_;
    double mean_sq_a_;
    friend struct ResolventSolver;
};

enum class ResolventMethod { DenseSvd, Krylov };

struct ResolventResult {
    double norm = 0.0;           // ||(P_h + i h a)^{-1}||
    double conv_residual = 0.0;  // solver-reported relative residual
    int iterations = 0;
    ResolventMethod method = ResolventMethod::Krylov;
};

/** Resolvent norm 1/sigma_min. DenseSvd assembles the matrix (K <= 48);
 * Krylov runs Lanczos on the inverted normal operator with an inner
 * preconditioned CG (y-invariant dampings decouple in k_y and are handled
 * block-wise, which is algebraically the same operator). Throws
 * SingularOperator on exact resonance and SolverDidNotConverge (carrying the
 * best estimate) when iterations run out. */
ResolventResult resolvent_norm(const StationaryOperator2D& op,
                               ResolventMethod method, double rtol = 1e-6,
                               std::uint64_t seed = 1);

struct Quasimode {
    FourierField2D u;       // minimizing unit vector
    double residual = 0.0;  // ||(P_h + i h a) u||
};

/** Right singular vector of sigma_min and its residual;
 * residual * resolvent_norm = 1 up to solver tolerance. */
Quasimode quasimode_extract(const StationaryOperator2D& op, double rtol = 1e-8,
                            std::uint64_t seed = 1);

/** Exact identities of the discrete operator on any field u, with
 * f = (P_h + i h a) u:
 *   h ||a^{1/2} u||^2 = Im <f, u>   and   ||h grad u||^2 - ||u||^2 = Re <f, u>.
 * Returns the two relative residuals. */
std::pair<double, double> apriori_identity_residuals(
    const StationaryOperator2D& op, const FourierField2D& u);

struct SweepPoint {
    double h = 0.0;
    int K = 0;
    double norm = 0.0;
    double conv_residual = 0.0;
    double wall_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // h descending
    FitReport fit;                   // log norm vs log(1/h)
    double predicted_exponent = 0.0;
    bool tolerance_met = false;
};

struct SweepOptions {
    ResolventMethod method = ResolventMethod::Krylov;
    double fit_tolerance = 0.15;
    double solver_rtol = 1e-5;
    std::uint64_t seed = 1;
};

/** Resolvent-norm sweep over h with truncation K_rule(h); fits the scaling
 * exponent and compares against the predicted 2 + 2/(2 beta + 5) (disk) or
 * 2 + 1/(gamma + 2) (strip). Requires >= 5 points. */
SweepResult exponent_sweep(const DampingProfile& damping,
                           const std::vector<double>& h_list,
                           const std::function<int(double)>& k_rule,
                           const SweepOptions& opts = {});

double predicted_resolvent_exponent(const DampingProfile& damping);

struct GeneratorSpectrum {
    Eigen::VectorXcd eigenvalues;   // of [[0, I], [Lap, -a]]
    double max_real = 0.0;
    double min_abs_real_window = 0.0;  // over |Im| in [1, K/2]
    FitReport edge_fit;                // log |Re| vs log |Im| on bin minima
    double alpha_fit = 0.0;            // -1/slope when the fit exists
};

/** Dense eigenvalues of the first-order generator on the truncated basis
 * (H^1 x L^2 block discretization). K <= 24. */
GeneratorSpectrum generator_spectrum(const DampingProfile& damping, int K);

}  // namespace torwave
