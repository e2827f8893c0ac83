#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace torwave {

/** Holder-class parameters (beta, sigma = 1/beta, smoothness m, derivative
 * order k with k*sigma < 1). */
struct HolderParams {
    double beta;
    double sigma;
    int m;
    int k;

    HolderParams(double beta_, int m_, int k_);
};

enum class DampingKind { Disk, Strip, Custom };

struct DiskGeometry {
    double cx;
    double cy;
    double r0;
};

struct StripGeometry {
    std::vector<std::pair<double, double>> intervals;  // inside (-pi, pi)
    double gamma;
};

/** A damping a(z) >= 0 on the 2-torus, immutable after construction.
 *
 * Disk profiles evaluate to (r0 - |z-c|)_+^beta with the periodic distance,
 * so a = dist(z, boundary)^beta exactly inside the damped disc. Strip
 * profiles depend on x only, vanish like |x - edge|^gamma at the interval
 * edges and bridge the middle with a C^2 blend of the two edge powers. */
class DampingProfile {
  public:
    using EvalFn = std::function<double(double, double)>;
    using GradFn = std::function<Eigen::Vector2d(double, double)>;
    using HessFn = std::function<Eigen::Matrix2d(double, double)>;

    DampingKind kind() const { return kind_; }
    const std::optional<HolderParams>& params() const { return params_; }
    /** Vanishing order at the boundary (beta for disks, gamma for strips). */
    double vanishing_order() const { return order_; }

    double operator()(double x, double y) const { return eval_(x, y); }

    bool has_derivatives() const { return static_cast<bool>(grad_); }
    Eigen::Vector2d grad(double x, double y) const;
    Eigen::Matrix2d hess(double x, double y) const;

    const DiskGeometry& disk() const;
    const StripGeometry& strip() const;

    static DampingProfile custom(EvalFn eval,
                                 std::optional<HolderParams> params = {},
                                 GradFn grad = nullptr, HessFn hess = nullptr);

  private:
    friend DampingProfile make_disk_damping(double, double, double, double);
    friend DampingProfile make_strip_damping(
        const std::vector<std::pair<double, double>>&, double);
    DampingProfile() = default;

    DampingKind kind_ = DampingKind::Custom;
    std::optional<HolderParams> params_;
    double order_ = 0.0;
    EvalFn eval_;
    GradFn grad_;
    HessFn hess_;
    std::optional<DiskGeometry> disk_;
    std::optional<StripGeometry> strip_;
};

/** Disc damping (r0 - dist(z, c))_+^beta; analytic derivatives for beta >= 2.
 * Requires 0 < r0 < pi and beta > 0. */
DampingProfile make_disk_damping(double cx, double cy, double r0, double beta);

/** Strip damping sum_j V_j(x): (x-a_j)^gamma on the left quarter of each
 * interval, (b_j-x)^gamma on the right quarter, C^2 blend between.
 * Requires disjoint intervals inside (-pi, pi) and gamma >= 0. */
DampingProfile make_strip_damping(
    const std::vector<std::pair<double, double>>& intervals, double gamma);

/** Exact periodic distance from z to the boundary of {a > 0}.
 * Throws UnsupportedGeometry for custom profiles. */
double dist_to_boundary(const DampingProfile& f, double x, double y);

struct ClassRatioEntry {
    int ax;             // multi-index (ax, ay)
    int ay;
    double worst_ratio;  // sup |d^alpha f| / f^{1-|alpha| sigma} over the grid
    double arg_x;
    double arg_y;
};

struct ClassCheckReport {
    std::vector<ClassRatioEntry> entries;  // 1 <= |alpha| <= k
    int grid_n = 0;
    double floor = 0.0;
    double cap = 0.0;
    bool used_analytic = false;
    bool pass = false;
    double worst() const;
};

/** Samples |d^alpha f| / f^{1-|alpha| sigma} for 1 <= |alpha| <= k on a
 * cell-centered grid_n x grid_n grid, skipping points with f < floor, and
 * compares the worst ratio against cap. Derivatives are analytic when the
 * profile provides them, otherwise centered differences of step 2pi/grid_n.
 * Never throws on failure; the report carries the verdict. */
ClassCheckReport check_class_membership(const DampingProfile& f, int grid_n,
                                        double floor, double cap);

}  // namespace torwave
