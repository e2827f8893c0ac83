#include "torwave/spectral2d.hpp"

#include <chrono>
#include <cmath>

#include "torwave/errors.hpp"
#include "torwave/krylov.hpp"
#include "torwave/lapack.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

StationaryOperator2D::StationaryOperator2D(const DampingProfile& a, double h,
                                           int K)
    : h_(h), K_(K), damping_(a) {
    if (!(h > 0.0)) throw InvalidInput("StationaryOperator2D: h <= 0");
    if (K < 1) throw InvalidInput("StationaryOperator2D: K < 1");
    grid_ = std::make_shared<SpectralGrid2D>(K);
    a_samples_ = sample_on_grid([&a](double x, double y) { return a(x, y); },
                                *grid_);
    const int m = 2 * K + 1;
    diag_.resize(m * m);
    for (int ky = -K; ky <= K; ++ky)
        for (int kx = -K; kx <= K; ++kx)
            diag_[(kx + K) + m * (ky + K)] =
                h * h * (double(kx) * kx + double(ky) * ky) - 1.0;
    mean_sq_a_ = a_samples_.squaredNorm() / a_samples_.size();
}

Eigen::VectorXcd StationaryOperator2D::apply_vec(
    const Eigen::VectorXcd& c) const {
    Eigen::VectorXcd out = diag_.array() * c.array();
    out += Cplx(0.0, h_) * grid_->multiply(a_samples_, c);
    return out;
}

Eigen::VectorXcd StationaryOperator2D::apply_adjoint_vec(
    const Eigen::VectorXcd& c) const {
    Eigen::VectorXcd out = diag_.array() * c.array();
    out -= Cplx(0.0, h_) * grid_->multiply(a_samples_, c);
    return out;
}

FourierField2D StationaryOperator2D::apply(const FourierField2D& u) const {
    if (u.K != K_) throw InvalidInput("apply_operator: truncation mismatch");
    FourierField2D out = u;
    out.coeffs = apply_vec(u.coeffs);
    return out;
}

FourierField2D StationaryOperator2D::apply_adjoint(
    const FourierField2D& u) const {
    if (u.K != K_) throw InvalidInput("apply_operator: truncation mismatch");
    FourierField2D out = u;
    out.coeffs = apply_adjoint_vec(u.coeffs);
    return out;
}

Eigen::MatrixXcd StationaryOperator2D::dense() const {
    return assemble_dense(
        [this](const FourierField2D& u) { return apply(u); }, K_, h_);
}

namespace {

// Shared machinery of resolvent_norm / quasimode_extract.
struct KrylovOutcome {
    double sigma_min;
    double conv_residual;
    int iterations;
    Eigen::VectorXcd vector;  // empty unless requested
};

void check_not_singular(const StationaryOperator2D& op, double mean_sq_a) {
    const double dmin = op.symbol_diag().cwiseAbs().minCoeff();
    if (dmin * dmin + op.h() * op.h() * mean_sq_a == 0.0)
        throw SingularOperator(
            "resolvent_norm: operator singular (exact resonance, no damping)");
}

KrylovOutcome sigma_min_krylov(const StationaryOperator2D& op, double rtol,
                               std::uint64_t seed, bool want_vector) {
    const int K = op.trunc();
    const int n = (2 * K + 1) * (2 * K + 1);
    const double h = op.h();
    const double mean_sq_a =
        op.a_samples().squaredNorm() / op.a_samples().size();
    check_not_singular(op, mean_sq_a);

    // Normal operator N = M^* M and its exact Jacobi diagonal
    // (h^2|k|^2-1)^2 + h^2 mean(a^2).
    Eigen::VectorXd jac(n);
    for (int i = 0; i < n; ++i) {
        const double d = op.symbol_diag()[i];
        jac[i] = 1.0 / (d * d + h * h * mean_sq_a);
    }
    auto apply_n = [&](const Eigen::VectorXcd& v) {
        return op.apply_adjoint_vec(op.apply_vec(v));
    };
    auto precond = [&](const Eigen::VectorXcd& v) {
        return (jac.array() * v.array()).matrix().eval();
    };

    const int inner_max = 60000;
    const double inner_rtol = std::min(1e-10, rtol * 1e-3);
    int total_inner = 0;
    auto apply_n_inv = [&](const Eigen::VectorXcd& v) {
        const PcgResult r =
            pcg_solve(apply_n, precond, v, inner_rtol, inner_max);
        total_inner += r.iterations;
        if (!r.converged)
            throw SolverDidNotConverge(
                "resolvent_norm: inner PCG did not converge", 0.0,
                r.rel_residual);
        return r.x;
    };

    const LanczosResult lz =
        lanczos_largest(apply_n_inv, n, rtol, 48, seed, want_vector);
    KrylovOutcome out;
    out.sigma_min = 1.0 / std::sqrt(lz.value);
    out.conv_residual = lz.ritz_residual / lz.value;
    out.iterations = total_inner;
    if (!lz.converged)
        throw SolverDidNotConverge("resolvent_norm: Lanczos did not converge",
                                   1.0 / out.sigma_min, out.conv_residual);
    if (want_vector) out.vector = lz.vector;
    return out;
}

// y-invariant dampings decouple over k_y; each block is the 1D operator
// -h^2 d_x^2 + (h^2 k_y^2 - 1) + i h W(x) on the same x grid.
double sigma_min_strip_blocks(const StationaryOperator2D& op) {
    const int K = op.trunc();
    const int m = 2 * K + 1;
    const int N = op.grid().grid_n();
    const double h = op.h();

    // Toeplitz coefficients t_m = (1/N) sum_i W(x_i) e^{i m x_i} of the 1D
    // multiplication matrix on the operator's x grid (row y = -pi).
    SpectralGrid1D line(N);
    Eigen::VectorXcd w_line(N);
    for (int i = 0; i < N; ++i) w_line[i] = op.a_samples()[i];
    const Eigen::VectorXcd what = line.fft(w_line);
    auto toeplitz = [&](int lag) {
        const int bin = (((-lag) % N) + N) % N;
        const double sgn = (lag % 2 == 0) ? 1.0 : -1.0;
        return sgn * what[bin];
    };
    Eigen::MatrixXcd mult(m, m);
    for (int k = -K; k <= K; ++k)
        for (int kk = -K; kk <= K; ++kk)
            mult(kk + K, k + K) = toeplitz(k - kk);

    double smin = std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd block(m, m);
    for (int ky = 0; ky <= K; ++ky) {
        block = Cplx(0.0, h) * mult;
        for (int kx = -K; kx <= K; ++kx)
            block(kx + K, kx + K) +=
                h * h * (double(kx) * kx + double(ky) * ky) - 1.0;
        smin = std::min(smin, lapack::smallest_singular_value(block));
    }
    return smin;
}

}  // namespace

ResolventResult resolvent_norm(const StationaryOperator2D& op,
                               ResolventMethod method, double rtol,
                               std::uint64_t seed) {
    ResolventResult res;
    res.method = method;
    if (method == ResolventMethod::DenseSvd) {
        if (op.trunc() > 48)
            throw InvalidInput("resolvent_norm: dense SVD capped at K <= 48");
        const double mean_sq_a =
            op.a_samples().squaredNorm() / op.a_samples().size();
        check_not_singular(op, mean_sq_a);
        const double smin = lapack::smallest_singular_value(op.dense());
        if (smin == 0.0)
            throw SingularOperator("resolvent_norm: operator singular");
        res.norm = 1.0 / smin;
        res.conv_residual = 0.0;
        return res;
    }
    if (op.damping().kind() == DampingKind::Strip) {
        const double mean_sq_a =
            op.a_samples().squaredNorm() / op.a_samples().size();
        check_not_singular(op, mean_sq_a);
        const double smin = sigma_min_strip_blocks(op);
        res.norm = 1.0 / smin;
        res.conv_residual = 0.0;
        return res;
    }
    const KrylovOutcome out = sigma_min_krylov(op, rtol, seed, false);
    res.norm = 1.0 / out.sigma_min;
    res.conv_residual = out.conv_residual;
    res.iterations = out.iterations;
    return res;
}

Quasimode quasimode_extract(const StationaryOperator2D& op, double rtol,
                            std::uint64_t seed) {
    const KrylovOutcome out = sigma_min_krylov(op, rtol, seed, true);
    Quasimode q;
    q.u = FourierField2D::zero(op.trunc(), op.h());
    q.u.coeffs = out.vector;
    q.residual = op.apply(q.u).norm();
    return q;
}

std::pair<double, double> apriori_identity_residuals(
    const StationaryOperator2D& op, const FourierField2D& u) {
    const FourierField2D f = op.apply(u);
    const Cplx inner = u.coeffs.dot(f.coeffs);  // <f, u> = conj(u) . f

    // grid quadrature of a |u|^2
    const Eigen::VectorXcd vals = op.grid().to_grid(u.coeffs);
    double au2 = 0.0;
    for (int i = 0; i < vals.size(); ++i)
        au2 += op.a_samples()[i] * std::norm(vals[i]);
    au2 /= vals.size();

    const double lhs_im = op.h() * au2;
    const double rhs_im = inner.imag();
    const double res_im = std::abs(lhs_im - rhs_im) /
                          (std::abs(lhs_im) + std::abs(rhs_im) + 1e-300);

    const double lhs_re =
        op.h() * op.h() * u.grad_norm_sq() - u.coeffs.squaredNorm();
    const double rhs_re = inner.real();
    const double res_re = std::abs(lhs_re - rhs_re) /
                          (std::abs(lhs_re) + std::abs(rhs_re) + 1e-300);
    return {res_im, res_re};
}

double predicted_resolvent_exponent(const DampingProfile& damping) {
    switch (damping.kind()) {
        case DampingKind::Disk:
            return 2.0 + 2.0 / (2.0 * damping.vanishing_order() + 5.0);
        case DampingKind::Strip:
            return 2.0 + 1.0 / (damping.vanishing_order() + 2.0);
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

SweepResult exponent_sweep(const DampingProfile& damping,
                           const std::vector<double>& h_list,
                           const std::function<int(double)>& k_rule,
                           const SweepOptions& opts) {
    if (h_list.size() < 5)
        throw InvalidInput("exponent_sweep: need >= 5 points");
    SweepResult sweep;
    sweep.predicted_exponent = predicted_resolvent_exponent(damping);

    std::vector<double> hs = h_list;
    std::sort(hs.begin(), hs.end(), std::greater<double>());
    for (double h : hs) {
        const int K = k_rule(h);
        const auto t0 = std::chrono::steady_clock::now();
        StationaryOperator2D op(damping, h, K);
        const ResolventResult r =
            resolvent_norm(op, opts.method, opts.solver_rtol, opts.seed);
        const auto t1 = std::chrono::steady_clock::now();
        SweepPoint pt;
        pt.h = h;
        pt.K = K;
        pt.norm = r.norm;
        pt.conv_residual = r.conv_residual;
        pt.wall_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        sweep.points.push_back(pt);
    }
    std::vector<double> inv_h, norms;
    for (const auto& pt : sweep.points) {
        inv_h.push_back(1.0 / pt.h);
        norms.push_back(pt.norm);
    }
    sweep.fit = loglog_fit(inv_h, norms);
    if (std::isfinite(sweep.predicted_exponent))
        sweep.fit.against(sweep.predicted_exponent, opts.fit_tolerance);
    sweep.tolerance_met = sweep.fit.pass;
    return sweep;
}

GeneratorSpectrum generator_spectrum(const DampingProfile& damping, int K) {
    if (K > 24) throw InvalidInput("generator_spectrum: K <= 24 (dense)");
    const int m = 2 * K + 1;
    const int n = m * m;

    FourierWorkspace2D ws(K);
    const Eigen::VectorXd a = sample_on_grid(
        [&damping](double x, double y) { return damping(x, y); }, ws.grid());
    MultiplicationOperator2D mult(ws.shared_grid(), a);
    const Eigen::MatrixXcd a_conv = assemble_dense(
        [&mult](const FourierField2D& u) { return mult.apply(u); }, K, 1.0);

    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) gen(i, n + i) = 1.0;
    for (int ky = -K; ky <= K; ++ky)
        for (int kx = -K; kx <= K; ++kx) {
            const int i = (kx + K) + m * (ky + K);
            gen(n + i, i) = -(double(kx) * kx + double(ky) * ky);
        }
    gen.block(n, n, n, n) = -a_conv;

    GeneratorSpectrum out;
    out.eigenvalues = lapack::eigenvalues(std::move(gen));
    out.max_real = out.eigenvalues.real().maxCoeff();

    const double im_max = K / 2.0;
    double min_window = std::numeric_limits<double>::infinity();
    for (int i = 0; i < out.eigenvalues.size(); ++i) {
        const double im = std::abs(out.eigenvalues[i].imag());
        if (im >= 1.0 && im <= im_max)
            min_window =
                std::min(min_window, std::abs(out.eigenvalues[i].real()));
    }
    out.min_abs_real_window = min_window;

    // Spectral edge: per log-bin of |Im|, the smallest |Re|.
    const int nbins = 12;
    std::vector<double> bin_im, bin_re;
    for (int b = 0; b < nbins; ++b) {
        const double lo = std::exp(std::log(1.0) +
                                   (std::log(im_max) - std::log(1.0)) * b / nbins);
        const double hi = std::exp(std::log(1.0) + (std::log(im_max) - std::log(1.0)) *
                                                        (b + 1) / nbins);
        double best = std::numeric_limits<double>::infinity();
        double at = 0.0;
        for (int i = 0; i < out.eigenvalues.size(); ++i) {
            const double im = std::abs(out.eigenvalues[i].imag());
            const double re = std::abs(out.eigenvalues[i].real());
            if (im >= lo && im < hi && re < best) {
                best = re;
                at = im;
            }
        }
        if (std::isfinite(best) && best > 0.0) {
            bin_im.push_back(at);
            bin_re.push_back(best);
        }
    }
    if (bin_im.size() >= 4) {
        out.edge_fit = loglog_fit(bin_im, bin_re);
        if (out.edge_fit.slope != 0.0) out.alpha_fit = -1.0 / out.edge_fit.slope;
    }
    return out;
}

}  // namespace torwave
