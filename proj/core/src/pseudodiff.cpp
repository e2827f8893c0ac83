#include "torwave/pseudodiff.hpp"

#include <cmath>

#include <Eigen/LU>

#include "torwave/errors.hpp"
#include "torwave/krylov.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

namespace {

// Plateau bump: 1 on |t| <= 1/4, 0 on |t| >= 1/2, C^inf between.
double plateau(double t) {
    return smooth_transition((0.5 - std::abs(t)) / 0.25);
}

}  // namespace

double CutoffPsi1::operator()(double eta) const {
    return plateau(eta - 1.0) + plateau(eta + 1.0);
}

double normal_form_multiplier(double eta) {
    const double psi = CutoffPsi1{}(eta);
    if (psi == 0.0) return 0.0;
    return -psi / (4.0 * eta);
}

FourierField2D NormalFormGenerator::apply(const FourierField2D& u) const {
    if (u.K != K_) throw InvalidInput("generator: truncation mismatch");
    // b(hD_y) (A u) + A (b(hD_y) u)
    FourierField2D au = u;
    au.coeffs = grid_->multiply(A_samples_, u.coeffs);
    au.coeffs.array() *= b_diag_.array();
    FourierField2D bu = u;
    bu.coeffs.array() *= b_diag_.array();
    au.coeffs += grid_->multiply(A_samples_, bu.coeffs);
    return au;
}

double NormalFormGenerator::op_norm() const {
    if (op_norm_ >= 0.0) return op_norm_;
    const int n = (2 * K_ + 1) * (2 * K_ + 1);
    FourierField2D tmp = FourierField2D::zero(K_, h_);
    auto apply_sq = [&](const Eigen::VectorXcd& v) {
        tmp.coeffs = v;
        tmp = apply(apply(tmp));
        return tmp.coeffs;
    };
    const LanczosResult r = lanczos_largest(apply_sq, n, 1e-8, 80, 0x9e1f);
    op_norm_ = std::sqrt(std::max(0.0, r.value));
    return op_norm_;
}

Eigen::MatrixXcd NormalFormGenerator::dense() const {
    return assemble_dense(
        [this](const FourierField2D& u) { return apply(u); }, K_, h_);
}

NormalFormGenerator build_generator(const DampingProfile& a, double h, int K) {
    if (!(h > 0.0 && h < 1.0))
        throw InvalidInput("build_generator: h must lie in (0,1)");
    const int k_required = static_cast<int>(std::ceil(2.0 / h));
    if (K < k_required)
        throw InvalidInput("build_generator: K too small for the microlocal "
                           "window, need K >= " +
                           std::to_string(k_required));

    NormalFormGenerator g;
    g.K_ = K;
    g.h_ = h;
    g.grid_ = std::make_shared<SpectralGrid2D>(K);
    const int n = g.grid_->grid_n();

    g.a_samples_ = sample_on_grid(
        [&a](double x, double y) { return a(x, y); }, *g.grid_);

    // Primitive of a - A(a) in y on the operator grid (trapezoid cumsum;
    // the integrand has exact zero fiber mean, so the wrap closes).
    g.A_samples_.resize(n * n);
    g.W_samples_.resize(n * n);
    const double dy = kTwoPi / n;
    for (int i = 0; i < n; ++i) {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += g.a_samples_[i + n * j];
        mean /= n;
        double acc = 0.0;
        g.A_samples_[i] = 0.0;
        g.W_samples_[i] = mean;
        for (int j = 1; j < n; ++j) {
            acc += 0.5 * dy *
                   ((g.a_samples_[i + n * (j - 1)] - mean) +
                    (g.a_samples_[i + n * j] - mean));
            g.A_samples_[i + n * j] = acc;
            g.W_samples_[i + n * j] = mean;
        }
    }

    const int m = 2 * K + 1;
    g.b_diag_.resize(m * m);
    for (int ky = -K; ky <= K; ++ky) {
        const double b = normal_form_multiplier(h * ky);
        for (int kx = -K; kx <= K; ++kx)
            g.b_diag_[(kx + K) + m * (ky + K)] = b;
    }
    return g;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m) {
    if (!m.allFinite())
        throw InvalidInput("matrix_exponential: non-finite entries");
    if (m.rows() != m.cols())
        throw InvalidInput("matrix_exponential: matrix must be square");
    const int n = static_cast<int>(m.rows());
    using Mat = Eigen::MatrixXcd;

    // Pade(13) with scaling and squaring.
    static const double b[] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
    const double theta13 = 5.371920351148152;
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13)
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    const Mat a = m / std::pow(2.0, squarings);

    const Mat id = Mat::Identity(n, n);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a2 * a4;
    const Mat u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
             b[5] * a4 + b[3] * a2 + b[1] * id);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                  b[4] * a4 + b[2] * a2 + b[0] * id;
    Mat r = (v - u).partialPivLu().solve(v + u);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

FourierField2D apply_exponential(const NormalFormGenerator& g, double s,
                                 const FourierField2D& v, double tol) {
    FourierField2D sum = v;
    FourierField2D term = v;
    for (int k = 1; k <= 400; ++k) {
        term = g.apply(term);
        term.coeffs *= s / k;
        sum.coeffs += term.coeffs;
        if (term.norm() <= tol * sum.norm()) return sum;
    }
    throw SolverDidNotConverge("apply_exponential: series did not settle",
                               sum.norm(), term.norm());
}

namespace {

bool in_probe_window(double h, int kx, int ky) {
    return std::abs(h * ky - 1.0) <= 0.125 && std::sqrt(h) * std::abs(kx) <= 1.0;
}

}  // namespace

FourierField2D make_microlocal_probe(double h, int K) {
    FourierField2D p = FourierField2D::zero(K, h);
    for (int ky = -K; ky <= K; ++ky) {
        for (int kx = -K; kx <= K; ++kx) {
            if (!in_probe_window(h, kx, ky)) continue;
            const double wy = (h * ky - 1.0) / 0.0625;
            const double wx = std::sqrt(h) * kx;
            p.at(kx, ky) = std::exp(-wy * wy - wx * wx);
        }
    }
    const double nrm = p.norm();
    if (nrm == 0.0)
        throw InvalidInput("make_microlocal_probe: window holds no mode");
    p.coeffs /= nrm;
    return p;
}

bool is_microlocalized(const FourierField2D& u, double rel_tol) {
    double off = 0.0;
    for (int ky = -u.K; ky <= u.K; ++ky)
        for (int kx = -u.K; kx <= u.K; ++kx)
            if (!in_probe_window(u.h, kx, ky)) off += std::norm(u.at(kx, ky));
    return std::sqrt(off) <= rel_tol * u.norm();
}

double conjugation_residual(const DampingProfile& a, double h, int K,
                            const FourierField2D& probe) {
    if (probe.K != K) throw InvalidInput("conjugation_residual: K mismatch");
    if (!is_microlocalized(probe))
        throw InvalidInput("conjugation_residual: probe not microlocalized");

    const NormalFormGenerator g = build_generator(a, h, K);
    const SpectralGrid2D& grid = g.grid();
    const Cplx ih(0.0, h);

    auto p_h = [&](const FourierField2D& u) {
        FourierField2D out = u;
        for (int ky = -K; ky <= K; ++ky)
            for (int kx = -K; kx <= K; ++kx)
                out.at(kx, ky) *=
                    h * h * (double(kx) * kx + double(ky) * ky) - 1.0;
        return out;
    };
    auto dx2 = [&](const FourierField2D& u) {
        FourierField2D out = u;
        for (int ky = -K; ky <= K; ++ky)
            for (int kx = -K; kx <= K; ++kx)
                out.at(kx, ky) *= h * h * double(kx) * kx;
        return out;
    };

    // e^{G} (P_h + i h a) e^{-G} w
    FourierField2D w1 = apply_exponential(g, -1.0, probe);
    FourierField2D z = p_h(w1);
    z.coeffs += ih * grid.multiply(g.a_samples(), w1.coeffs);
    z = apply_exponential(g, 1.0, z);

    // (P_h + i h A(a) - [h^2 D_x^2, G]) w
    FourierField2D t = p_h(probe);
    t.coeffs += ih * grid.multiply(g.averaged_samples(), probe.coeffs);
    FourierField2D comm = dx2(g.apply(probe));
    comm.coeffs -= g.apply(dx2(probe)).coeffs;
    t.coeffs -= comm.coeffs;

    z.coeffs -= t.coeffs;
    return z.norm();
}

}  // namespace torwave
