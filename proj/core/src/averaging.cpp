#include "torwave/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "torwave/errors.hpp"
#include "torwave/fit.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

namespace {
constexpr double kZeroTol = 1e-14;    // "grid zero" threshold for W
constexpr double kSupportFloor = 1e-12;
}  // namespace

RationalDirection::RationalDirection(int p_, int q_) : p(p_), q(q_) {
    if (p == 0 && q == 0)
        throw InvalidInput("RationalDirection: (0,0) is not a direction");
    if (int_gcd(p, q) != 1)
        throw InvalidInput("RationalDirection: p, q must be coprime");
}

double RationalDirection::period() const { return kTwoPi * norm(); }

Eigen::Vector2d RationalDirection::unit() const {
    return Eigen::Vector2d(p, q) / norm();
}

Eigen::Vector2d RationalDirection::transversal() const {
    return Eigen::Vector2d(q, -p) / norm();
}

AveragedDamping average_along(const DampingProfile& f,
                              const RationalDirection& v, int grid_n) {
    if (grid_n < 256) throw InvalidInput("average_along: grid_n < 256");

    const double tau = v.period();
    const Eigen::Vector2d ex = v.transversal();
    const Eigen::Vector2d ey = v.unit();

    auto orbit_mean = [&, grid_n](double x) {
        double acc = 0.0;
        for (int j = 0; j < grid_n; ++j) {
            const double yy = -tau / 2 + tau * j / grid_n;
            acc += f(x * ex[0] + yy * ey[0], x * ex[1] + yy * ey[1]);
        }
        return acc / grid_n;
    };

    AveragedDamping w;
    w.tau_ = tau;
    w.continuous_ = orbit_mean;
    w.samples_.resize(grid_n);
    for (int i = 0; i < grid_n; ++i) w.samples_[i] = orbit_mean(w.node(i));

    // Boundary points: a grid zero adjacent to a point above the support
    // floor, refined by bisection on the continuous orbit integral.
    auto refine = [&](double lo, double hi, bool positive_at_hi) {
        for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool pos = orbit_mean(mid) > kZeroTol;
            if (pos == positive_at_hi)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };
    for (int i = 0; i < grid_n; ++i) {
        const int inext = (i + 1) % grid_n;
        const double xi = w.node(i);
        const double xnext = xi + tau / grid_n;
        const bool zi = w.samples_[i] < kZeroTol;
        const bool pi_ = w.samples_[inext] >= kSupportFloor;
        const bool pz = w.samples_[i] >= kSupportFloor;
        const bool zn = w.samples_[inext] < kZeroTol;
        if (zi && pi_)
            w.boundary_.push_back({refine(xi, xnext, true), true});
        else if (pz && zn)
            w.boundary_.push_back({refine(xi, xnext, false), false});
    }
    return w;
}

std::pair<double, double> fit_vanishing_exponent(
    const AveragedDamping& w, Side side, std::pair<double, double> window) {
    const auto [dmin, dmax] = window;
    if (!(dmin > 0.0 && dmin < dmax))
        throw InvalidInput("fit_vanishing_exponent: need 0 < d_min < d_max");

    const bool want_right = side == Side::Right;
    const BoundaryPoint* bp = nullptr;
    for (const auto& b : w.boundary_points()) {
        if (b.positive_on_right == want_right) {
            bp = &b;
            break;
        }
    }
    if (!bp)
        throw InvalidInput(
            "fit_vanishing_exponent: no boundary point with the requested "
            "orientation");

    std::vector<double> d, val;
    for (int i = 0; i < w.grid_n(); ++i) {
        const double off =
            want_right ? w.node(i) - bp->x : bp->x - w.node(i);
        if (off < dmin || off > dmax) continue;
        const double wi = w.samples()[i];
        if (wi <= 0.0)
            throw InvalidInput("fit_vanishing_exponent: W <= 0 in the window");
        d.push_back(off);
        val.push_back(wi);
    }
    if (d.size() < 8)
        throw InvalidInput("fit_vanishing_exponent: fewer than 8 samples");

    const FitReport fit = loglog_fit(d, val);
    return {fit.slope, fit.r2};
}

CoveringSamples pullback_to_covering(const DampingProfile& f,
                                     const RationalDirection& v, int n_x,
                                     int n_y) {
    const double tau = v.period();
    const Eigen::Vector2d ex = v.transversal();
    const Eigen::Vector2d ey = v.unit();
    CoveringSamples out;
    out.tau = tau;
    out.values.resize(n_x, n_y);
    for (int j = 0; j < n_y; ++j) {
        const double yy = -tau / 2 + tau * j / n_y;
        for (int i = 0; i < n_x; ++i) {
            const double xx = -tau / 2 + tau * i / n_x;
            out.values(i, j) =
                f(xx * ex[0] + yy * ey[0], xx * ex[1] + yy * ey[1]);
        }
    }
    return out;
}

int count_positive_components(const Eigen::MatrixXd& values, double threshold) {
    const int nx = static_cast<int>(values.rows());
    const int ny = static_cast<int>(values.cols());
    Eigen::MatrixXi label = Eigen::MatrixXi::Constant(nx, ny, -1);
    int count = 0;
    for (int j0 = 0; j0 < ny; ++j0) {
        for (int i0 = 0; i0 < nx; ++i0) {
            if (values(i0, j0) <= threshold || label(i0, j0) >= 0) continue;
            std::deque<std::pair<int, int>> queue{{i0, j0}};
            label(i0, j0) = count;
            while (!queue.empty()) {
                const auto [i, j] = queue.front();
                queue.pop_front();
                const int nbr[4][2] = {{(i + 1) % nx, j},
                                       {(i + nx - 1) % nx, j},
                                       {i, (j + 1) % ny},
                                       {i, (j + ny - 1) % ny}};
                for (const auto& nb : nbr) {
                    if (values(nb[0], nb[1]) > threshold &&
                        label(nb[0], nb[1]) < 0) {
                        label(nb[0], nb[1]) = count;
                        queue.push_back({nb[0], nb[1]});
                    }
                }
            }
            ++count;
        }
    }
    return count;
}

PrimitiveField primitive_A(const DampingProfile& a, int n_x, int n_y) {
    if (n_x < 256 || n_y < 256)
        throw InvalidInput("primitive_A: grid sizes must be >= 256");

    PrimitiveField out;
    out.A.resize(n_x, n_y);
    out.W.resize(n_x);
    out.sup_abs_A.resize(n_x);
    out.bound_A.resize(n_x);
    const double dy = kTwoPi / n_y;

    Eigen::VectorXd row(n_y);
    double wrap = 0.0;
    for (int i = 0; i < n_x; ++i) {
        const double x = -kPi + kTwoPi * i / n_x;
        for (int j = 0; j < n_y; ++j) row[j] = a(x, -kPi + dy * j);
        const double wmean = row.mean();
        out.W[i] = wmean;
        double acc = 0.0;
        double sup = 0.0;
        out.A(i, 0) = 0.0;
        for (int j = 1; j < n_y; ++j) {
            acc += 0.5 * dy * ((row[j - 1] - wmean) + (row[j] - wmean));
            out.A(i, j) = acc;
            sup = std::max(sup, std::abs(acc));
        }
        // One more trapezoid panel closes the period; this is the zero-mean
        // check A(x, pi) = 0.
        const double closing =
            acc + 0.5 * dy * ((row[n_y - 1] - wmean) + (row[0] - wmean));
        wrap = std::max(wrap, std::abs(closing));
        out.sup_abs_A[i] = sup;
        out.bound_A[i] = 2.0 * kTwoPi * wmean;
    }
    out.wrap_residual = wrap;

    if (a.has_derivatives() && a.params()) {
        const HolderParams& hp = *a.params();
        for (int order = 1; order <= hp.k; ++order) {
            Eigen::VectorXd sup_d(n_x), bound_d(n_x);
            for (int i = 0; i < n_x; ++i) {
                const double x = -kPi + kTwoPi * i / n_x;
                for (int j = 0; j < n_y; ++j) {
                    const double y = -kPi + dy * j;
                    row[j] = order == 1 ? a.grad(x, y)[0] : a.hess(x, y)(0, 0);
                }
                const double dmean = row.mean();
                double acc = 0.0, sup = 0.0;
                for (int j = 1; j < n_y; ++j) {
                    acc += 0.5 * dy * ((row[j - 1] - dmean) + (row[j] - dmean));
                    sup = std::max(sup, std::abs(acc));
                }
                sup_d[i] = sup;
                bound_d[i] =
                    2.0 * kTwoPi * std::pow(out.W[i], 1.0 - order * hp.sigma);
            }
            out.sup_abs_dA.push_back(std::move(sup_d));
            out.bound_dA.push_back(std::move(bound_d));
        }
    }
    return out;
}

}  // namespace torwave
