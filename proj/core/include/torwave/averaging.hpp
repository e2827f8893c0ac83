#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "torwave/damping.hpp"

namespace torwave {

/** A rational direction (p, q), gcd(|p|, |q|) = 1. Orbits of the straight
 * line flow in this direction close up after one period 2pi sqrt(p^2+q^2). */
struct RationalDirection {
    int p;
    int q;

    RationalDirection(int p_, int q_);
    double norm() const { return std::sqrt(double(p) * p + double(q) * q); }
    double period() const;                // T_v = 2pi sqrt(p^2+q^2)
    double degree() const { return norm(); }
    Eigen::Vector2d unit() const;         // flow direction (p,q)/|.|
    Eigen::Vector2d transversal() const;  // (q,-p)/|.|, the X axis upstairs
};

enum class Side { Left, Right };

struct BoundaryPoint {
    double x;                  // transversal coordinate, refined by bisection
    bool positive_on_right;    // orientation of the support next to it
};

/** The direction average W(X) = A(f)_v on the transversal coordinate of the
 * covering torus, sampled on a uniform grid over one period. */
class AveragedDamping {
  public:
    const Eigen::VectorXd& samples() const { return samples_; }
    int grid_n() const { return static_cast<int>(samples_.size()); }
    double period() const { return tau_; }
    double node(int i) const { return -tau_ / 2 + tau_ * i / grid_n(); }
    double mean() const { return samples_.mean(); }

    /** Orbit average at an arbitrary transversal coordinate. */
    double continuous(double x) const { return continuous_(x); }

    const std::vector<BoundaryPoint>& boundary_points() const {
        return boundary_;
    }
    std::optional<double> fitted_exponent() const { return fitted_; }
    void set_fitted_exponent(double e) { fitted_ = e; }

  private:
    friend AveragedDamping average_along(const DampingProfile&,
                                         const RationalDirection&, int);
    Eigen::VectorXd samples_;
    double tau_ = 0.0;
    std::vector<BoundaryPoint> boundary_;
    std::optional<double> fitted_;
    std::function<double(double)> continuous_;
};

/** Average f along the rational direction v: exact periodic sampling of the
 * orbit with grid_n quadrature nodes per period (trapezoid = uniform mean).
 * Support boundaries are located on the grid and refined by bisection on the
 * continuous orbit integral to ~1e-9. Requires grid_n >= 256. */
AveragedDamping average_along(const DampingProfile& f,
                              const RationalDirection& v, int grid_n);

/** Least-squares exponent of W against the distance to its support boundary:
 * slope of log W vs log dist over dist in [window.first, window.second] on
 * the chosen side. Returns (exponent, r^2). Throws InvalidInput when fewer
 * than 8 samples fall in the window or W <= 0 inside it. */
std::pair<double, double> fit_vanishing_exponent(
    const AveragedDamping& w, Side side, std::pair<double, double> window);

/** Samples of the pullback of f to the covering torus of v: fundamental cell
 * [-tau/2, tau/2)^2, tau = 2pi sqrt(p^2+q^2), X along (q,-p), Y along (p,q). */
struct CoveringSamples {
    Eigen::MatrixXd values;  // (n_X, n_Y)
    double tau;
};

CoveringSamples pullback_to_covering(const DampingProfile& f,
                                     const RationalDirection& v, int n_x,
                                     int n_y);

/** Connected components of {values > threshold} with periodic 4-neighbor
 * connectivity. */
int count_positive_components(const Eigen::MatrixXd& values, double threshold);

/** The primitive A(x,y) = int_{-pi}^{y} (a(x,y') - A(a)(x)) dy' on a node
 * grid, with the companion bound report: |A| against 4pi W and, when the
 * profile has analytic derivatives, |d_x^j A| against 4pi W^{1-j sigma}. */
struct PrimitiveField {
    Eigen::MatrixXd A;   // (n_x, n_y), A(., y=-pi) = 0
    Eigen::VectorXd W;   // fiber means, length n_x
    double wrap_residual;             // max_x |A(x, pi)| (zero-mean check)
    Eigen::VectorXd sup_abs_A;        // per x
    Eigen::VectorXd bound_A;          // 4pi W
    std::vector<Eigen::VectorXd> sup_abs_dA;  // j = 1..k
    std::vector<Eigen::VectorXd> bound_dA;    // 4pi W^{1 - j sigma}
};

PrimitiveField primitive_A(const DampingProfile& a, int n_x, int n_y);

}  // namespace torwave
