#include "torwave/damping.hpp"

#include <algorithm>
#include <cmath>

#include "torwave/errors.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

HolderParams::HolderParams(double beta_, int m_, int k_)
    : beta(beta_), sigma(1.0 / beta_), m(m_), k(k_) {
    if (beta_ <= 0.0) throw InvalidInput("HolderParams: beta must be > 0");
    if (m_ < 0 || k_ < 0) throw InvalidInput("HolderParams: m, k must be >= 0");
    if (k_ * sigma >= 1.0)
        throw InvalidInput("HolderParams: need k * sigma < 1");
}

Eigen::Vector2d DampingProfile::grad(double x, double y) const {
    if (!grad_) throw UnsupportedGeometry("profile has no analytic gradient");
    return grad_(x, y);
}

Eigen::Matrix2d DampingProfile::hess(double x, double y) const {
    if (!hess_) throw UnsupportedGeometry("profile has no analytic hessian");
    return hess_(x, y);
}

const DiskGeometry& DampingProfile::disk() const {
    if (!disk_) throw UnsupportedGeometry("not a disk profile");
    return *disk_;
}

const StripGeometry& DampingProfile::strip() const {
    if (!strip_) throw UnsupportedGeometry("not a strip profile");
    return *strip_;
}

DampingProfile DampingProfile::custom(EvalFn eval,
                                      std::optional<HolderParams> params,
                                      GradFn grad, HessFn hess) {
    DampingProfile p;
    p.kind_ = DampingKind::Custom;
    p.eval_ = std::move(eval);
    p.params_ = params;
    p.order_ = params ? params->beta : 0.0;
    p.grad_ = std::move(grad);
    p.hess_ = std::move(hess);
    return p;
}

namespace {

// Largest k with k/beta < 1, capped at 2 (second derivatives are all the
// class machinery ever uses here).
int derivative_order_for(double beta) {
    int k = 0;
    while (k + 1 < beta && k < 2) ++k;
    return k;
}

}  // namespace

DampingProfile make_disk_damping(double cx, double cy, double r0, double beta) {
    if (!(r0 > 0.0 && r0 < kPi))
        throw InvalidInput("make_disk_damping: need 0 < r0 < pi");
    if (!(beta > 0.0)) throw InvalidInput("make_disk_damping: need beta > 0");

    DampingProfile p;
    p.kind_ = DampingKind::Disk;
    p.order_ = beta;
    p.disk_ = DiskGeometry{cx, cy, r0};
    p.params_ = HolderParams(beta, 10, derivative_order_for(beta));
    p.eval_ = [cx, cy, r0, beta](double x, double y) {
        return pos_pow(r0 - torus_dist(x, y, cx, cy), beta);
    };
    if (beta >= 2.0) {
        p.grad_ = [cx, cy, r0, beta](double x, double y) {
            const double dx = wrap_angle(x - cx), dy = wrap_angle(y - cy);
            const double r = std::sqrt(dx * dx + dy * dy);
            if (r >= r0 || r < 1e-9) return Eigen::Vector2d::Zero().eval();
            const double gp = -beta * std::pow(r0 - r, beta - 1.0);
            return Eigen::Vector2d(gp * dx / r, gp * dy / r);
        };
        p.hess_ = [cx, cy, r0, beta](double x, double y) {
            const double dx = wrap_angle(x - cx), dy = wrap_angle(y - cy);
            const double r = std::sqrt(dx * dx + dy * dy);
            Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
            if (r >= r0) return h;
            const double gpp = beta * (beta - 1.0) * std::pow(r0 - r, beta - 2.0);
            if (r < 1e-9) {
                // Cone point: no two-sided hessian exists; report the radial
                // limit so quadratures over the center line stay finite.
                h(0, 0) = h(1, 1) = gpp;
                return h;
            }
            const double gp = -beta * std::pow(r0 - r, beta - 1.0);
            const double ux = dx / r, uy = dy / r;
            h(0, 0) = gpp * ux * ux + gp / r * uy * uy;
            h(1, 1) = gpp * uy * uy + gp / r * ux * ux;
            h(0, 1) = h(1, 0) = (gpp - gp / r) * ux * uy;
            return h;
        };
    }
    return p;
}

namespace {

struct StripPiece {
    double a, b;     // interval
    double q1, q2;   // quarter points
    double gamma;

    double value(double x) const {
        if (x <= a || x >= b) return x == a || x == b ? 0.0 : 0.0;
        if (x <= q1) return pos_pow(x - a, gamma);
        if (x >= q2) return pos_pow(b - x, gamma);
        const double t = (x - q1) / (q2 - q1);
        const double s = smoothstep5(t);
        return (1.0 - s) * pos_pow(x - a, gamma) + s * pos_pow(b - x, gamma);
    }
    double d1(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double g = gamma;
        if (x <= q1) return g * pos_pow(x - a, g - 1.0);
        if (x >= q2) return -g * pos_pow(b - x, g - 1.0);
        const double w = q2 - q1;
        const double t = (x - q1) / w;
        const double s = smoothstep5(t);
        const double sp = 30.0 * t * t * (t - 1.0) * (t - 1.0) / w;
        const double A = pos_pow(x - a, g), B = pos_pow(b - x, g);
        const double Ap = g * pos_pow(x - a, g - 1.0);
        const double Bp = -g * pos_pow(b - x, g - 1.0);
        return (1.0 - s) * Ap + s * Bp + sp * (B - A);
    }
    double d2(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double g = gamma;
        if (x <= q1) return g * (g - 1.0) * pos_pow(x - a, g - 2.0);
        if (x >= q2) return g * (g - 1.0) * pos_pow(b - x, g - 2.0);
        const double w = q2 - q1;
        const double t = (x - q1) / w;
        const double s = smoothstep5(t);
        const double sp = 30.0 * t * t * (t - 1.0) * (t - 1.0) / w;
        const double spp = 60.0 * t * (2.0 * t - 1.0) * (t - 1.0) / (w * w);
        const double A = pos_pow(x - a, g), B = pos_pow(b - x, g);
        const double Ap = g * pos_pow(x - a, g - 1.0);
        const double Bp = -g * pos_pow(b - x, g - 1.0);
        const double App = g * (g - 1.0) * pos_pow(x - a, g - 2.0);
        const double Bpp = g * (g - 1.0) * pos_pow(b - x, g - 2.0);
        return (1.0 - s) * App + s * Bpp + 2.0 * sp * (Bp - Ap) +
               spp * (B - A);
    }
};

}  // namespace

DampingProfile make_strip_damping(
    const std::vector<std::pair<double, double>>& intervals, double gamma) {
    if (intervals.empty())
        throw InvalidInput("make_strip_damping: empty interval list");
    if (gamma < 0.0) throw InvalidInput("make_strip_damping: gamma < 0");
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end());
    for (size_t j = 0; j < sorted.size(); ++j) {
        const auto& [a, b] = sorted[j];
        if (!(a > -kPi && b < kPi && a < b))
            throw InvalidInput(
                "make_strip_damping: intervals must sit inside (-pi, pi)");
        if (j > 0 && sorted[j - 1].second > a)
            throw InvalidInput("make_strip_damping: overlapping intervals");
    }

    std::vector<StripPiece> pieces;
    for (const auto& [a, b] : sorted) {
        const double q1 = (3.0 * a + b) / 4.0;
        const double q2 = (a + 3.0 * b) / 4.0;
        pieces.push_back({a, b, q1, q2, gamma});
    }

    DampingProfile p;
    p.kind_ = DampingKind::Strip;
    p.order_ = gamma;
    p.strip_ = StripGeometry{sorted, gamma};
    if (gamma > 0.0)
        p.params_ = HolderParams(gamma, 10, derivative_order_for(gamma));
    p.eval_ = [pieces](double x, double) {
        const double xw = wrap_angle(x);
        double v = 0.0;
        for (const auto& pc : pieces) v += pc.value(xw);
        return v;
    };
    if (gamma >= 2.0) {
        p.grad_ = [pieces](double x, double) {
            const double xw = wrap_angle(x);
            double v = 0.0;
            for (const auto& pc : pieces) v += pc.d1(xw);
            return Eigen::Vector2d(v, 0.0);
        };
        p.hess_ = [pieces](double x, double) {
            const double xw = wrap_angle(x);
            double v = 0.0;
            for (const auto& pc : pieces) v += pc.d2(xw);
            Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
            h(0, 0) = v;
            return h;
        };
    }
    return p;
}

double dist_to_boundary(const DampingProfile& f, double x, double y) {
    switch (f.kind()) {
        case DampingKind::Disk: {
            const auto& g = f.disk();
            return std::abs(g.r0 - torus_dist(x, y, g.cx, g.cy));
        }
        case DampingKind::Strip: {
            const auto& g = f.strip();
            double d = std::numeric_limits<double>::infinity();
            for (const auto& [a, b] : g.intervals) {
                d = std::min(d, std::abs(wrap_angle(x - a)));
                d = std::min(d, std::abs(wrap_angle(x - b)));
            }
            return d;
        }
        default:
            throw UnsupportedGeometry(
                "dist_to_boundary: custom profile has no geometry");
    }
}

double ClassCheckReport::worst() const {
    double w = 0.0;
    for (const auto& e : entries) w = std::max(w, e.worst_ratio);
    return w;
}

ClassCheckReport check_class_membership(const DampingProfile& f, int grid_n,
                                        double floor, double cap) {
    if (grid_n < 64) throw InvalidInput("check_class_membership: grid_n < 64");
    if (!(floor > 0.0)) throw InvalidInput("check_class_membership: floor <= 0");
    if (!f.params())
        throw InvalidInput(
            "check_class_membership: profile carries no Holder parameters");
    const HolderParams& hp = *f.params();

    const double step = kTwoPi / grid_n;
    const bool analytic = f.has_derivatives();

    struct Alpha {
        int ax, ay;
    };
    std::vector<Alpha> alphas;
    for (int total = 1; total <= hp.k; ++total)
        for (int ax = total; ax >= 0; --ax)
            if (ax + (total - ax) == total) alphas.push_back({ax, total - ax});

    auto deriv_at = [&](const Alpha& al, double x, double y) -> double {
        if (analytic) {
            if (al.ax + al.ay == 1)
                return al.ax == 1 ? f.grad(x, y)[0] : f.grad(x, y)[1];
            const Eigen::Matrix2d h = f.hess(x, y);
            if (al.ax == 2) return h(0, 0);
            if (al.ay == 2) return h(1, 1);
            return h(0, 1);
        }
        // Centered differences at the grid step.
        if (al.ax + al.ay == 1) {
            const double dx = al.ax == 1 ? step : 0.0;
            const double dy = al.ay == 1 ? step : 0.0;
            return (f(x + dx, y + dy) - f(x - dx, y - dy)) / (2.0 * step);
        }
        if (al.ax == 2)
            return (f(x + step, y) - 2.0 * f(x, y) + f(x - step, y)) /
                   (step * step);
        if (al.ay == 2)
            return (f(x, y + step) - 2.0 * f(x, y) + f(x, y - step)) /
                   (step * step);
        return (f(x + step, y + step) - f(x + step, y - step) -
                f(x - step, y + step) + f(x - step, y - step)) /
               (4.0 * step * step);
    };

    ClassCheckReport rep;
    rep.grid_n = grid_n;
    rep.floor = floor;
    rep.cap = cap;
    rep.used_analytic = analytic;
    for (const auto& al : alphas) {
        ClassRatioEntry e{al.ax, al.ay, 0.0, 0.0, 0.0};
        const double expo = 1.0 - (al.ax + al.ay) * hp.sigma;
        for (int j = 0; j < grid_n; ++j) {
            const double y = -kPi + (j + 0.5) * step;
            for (int i = 0; i < grid_n; ++i) {
                const double x = -kPi + (i + 0.5) * step;
                const double v = f(x, y);
                if (v < floor) continue;
                const double ratio = std::abs(deriv_at(al, x, y)) /
                                     std::pow(v, expo);
                if (ratio > e.worst_ratio) {
                    e.worst_ratio = ratio;
                    e.arg_x = x;
                    e.arg_y = y;
                }
            }
        }
        rep.entries.push_back(e);
    }
    rep.pass = rep.worst() <= cap &&
               std::all_of(rep.entries.begin(), rep.entries.end(),
                           [](const ClassRatioEntry& e) {
                               return std::isfinite(e.worst_ratio);
                           });
    return rep;
}

}  // namespace torwave
