#include "torwave/oned.hpp"

#include <cmath>

#include "torwave/errors.hpp"
#include "torwave/fftgrid.hpp"
#include "torwave/lapack.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Real-space collocation: derivatives are circulants generated by their
// action on the delta at node 0, multiplications are diagonal.
MatrixXd spectral_derivative_matrix(const SpectralGrid1D& g, int order) {
    const int n = g.grid_n();
    VectorXcd delta = VectorXcd::Zero(n);
    delta[0] = 1.0;
    const VectorXcd col =
        order == 1 ? g.deriv(delta) : g.deriv2(delta);
    MatrixXd m(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) m(r, c) = std::real(col[((r - c) % n + n) % n]);
    return m;
}

// B = -h^2 d^2 + i h W + h^2 kappa sqrt(W) d  (reduced form, no -E shift)
MatrixXcd reduced_form_matrix(const SpectralGrid1D& g, double h,
                              const VectorXd& w, const VectorXd& kappa) {
    const int n = g.grid_n();
    MatrixXcd b = (-h * h) * spectral_derivative_matrix(g, 2).cast<Cplx>();
    const MatrixXd d1 = spectral_derivative_matrix(g, 1);
    for (int r = 0; r < n; ++r) {
        const double drift = h * h * kappa[r] * std::sqrt(w[r]);
        if (drift != 0.0)
            for (int c = 0; c < n; ++c) b(r, c) += drift * d1(r, c);
        b(r, r) += Cplx(0.0, h * w[r]);
    }
    return b;
}

// L = -d^2 + i/h W  (lambda form, no -lambda^2 shift)
MatrixXcd lambda_form_matrix(const SpectralGrid1D& g, double h,
                             const VectorXd& w) {
    const int n = g.grid_n();
    MatrixXcd b = -spectral_derivative_matrix(g, 2).cast<Cplx>();
    for (int r = 0; r < n; ++r) b(r, r) += Cplx(0.0, w[r] / h);
    return b;
}

// Grid samples of an even function satisfy w_j = w_{(n-j) mod n}; reflection
// then commutes with the operator and the even/odd subspaces split it into
// two blocks of half size, which makes the Hessenberg reduction 4x cheaper.
bool grid_even(const VectorXd& w) {
    const int n = static_cast<int>(w.size());
    const double scale = w.cwiseAbs().maxCoeff() + 1e-300;
    for (int j = 1; j < n; ++j)
        if (std::abs(w[j] - w[(n - j) % n]) > 1e-12 * scale) return false;
    return true;
}

VectorXd symmetrized(const VectorXd& w) {
    const int n = static_cast<int>(w.size());
    VectorXd s(n);
    for (int j = 0; j < n; ++j) s[j] = 0.5 * (w[j] + w[(n - j) % n]);
    return s;
}

// Orthonormal parity blocks of a reflection-invariant matrix.
std::vector<MatrixXcd> parity_blocks(const MatrixXcd& t) {
    const int n = static_cast<int>(t.rows());
    const int half = n / 2;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    std::vector<std::vector<std::pair<int, double>>> even, odd;
    even.push_back({{0, 1.0}});
    even.push_back({{half, 1.0}});
    for (int j = 1; j < half; ++j)
        even.push_back({{j, inv_sqrt2}, {n - j, inv_sqrt2}});
    for (int j = 1; j < half; ++j)
        odd.push_back({{j, inv_sqrt2}, {n - j, -inv_sqrt2}});

    auto project = [&](const std::vector<std::vector<std::pair<int, double>>>&
                           basis) {
        const int m = static_cast<int>(basis.size());
        MatrixXcd blk(m, m);
        for (int q = 0; q < m; ++q)
            for (int p = 0; p < m; ++p) {
                Cplx acc(0.0, 0.0);
                for (const auto& [r, wr] : basis[p])
                    for (const auto& [c, wc] : basis[q])
                        acc += wr * wc * t(r, c);
                blk(p, q) = acc;
            }
        return blk;
    };
    return {project(even), project(odd)};
}

void validate_kappa(const ReducedProblem1D& p) {
    const int n = p.grid_n();
    const double dx = kTwoPi / n;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(p.kappa[i]));
        const double diff =
            std::abs(p.kappa[(i + 1) % n] - p.kappa[i]) / dx;
        worst = std::max(worst, diff);
    }
    if (worst > p.kappa_bound)
        throw InvalidInput("reduced problem: kappa exceeds its W^{1,inf} cap");
}

// Mean-square quadrature of a grid function (the (2pi) factor cancels in
// every ratio this file forms).
double qnorm(const VectorXcd& v) { return v.norm() / std::sqrt(double(v.size())); }

}  // namespace

RegimeTag classify_regime(double h, double E, double c1, double delta) {
    if (!(h > 0.0 && h < 1.0)) throw InvalidInput("classify_regime: h not in (0,1)");
    RegimeTag t{Regime::HighHyperbolic, c1, delta};
    if (E <= c1 * h * h)
        t.regime = Regime::Elliptic;
    else if (E <= std::pow(h, 1.0 + delta))
        t.regime = Regime::LowHyperbolic;
    return t;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Elliptic: return "elliptic";
        case Regime::LowHyperbolic: return "low-hyperbolic";
        default: return "high-hyperbolic";
    }
}

Reduced1DSolution solve_reduced(const ReducedProblem1D& p) {
    const int n = p.grid_n();
    if (n < 512) throw InvalidInput("solve_reduced: grid_n < 512");
    if (p.kappa.size() != n || p.r.size() != n)
        throw InvalidInput("solve_reduced: field size mismatch");
    validate_kappa(p);

    SpectralGrid1D g(n);
    MatrixXcd t = reduced_form_matrix(g, p.h, p.W, p.kappa);
    t.diagonal().array() -= p.E;

    const double anorm = t.cwiseAbs().colwise().sum().maxCoeff();
    lapack::Lu lu(t);
    if (lu.rcond(anorm) < 1e-14)
        throw SingularOperator("solve_reduced: discrete operator singular");
    VectorXcd v = lu.solve(p.r);
    // one refinement pass keeps the residual at the 1e-10 contract
    VectorXcd resid = p.r - t * v;
    v += lu.solve(resid);
    resid = p.r - t * v;

    Reduced1DSolution sol;
    sol.v = std::move(v);
    sol.solve_residual = resid.norm() / p.r.norm();
    return sol;
}

double uniform_estimate_gain(const ReducedProblem1D& p,
                             const Eigen::VectorXcd& v) {
    const double delta = p.delta();
    const double drive = std::pow(p.h, -2.0 - delta) * qnorm(p.r);
    VectorXcd wv(v.size());
    for (int i = 0; i < v.size(); ++i) wv[i] = std::sqrt(p.W[i]) * v[i];
    const double obs =
        std::pow(p.h, -(3.0 * p.theta + 1.0) / (2.0 * (2.0 * p.theta + 1.0))) *
        qnorm(wv);
    return qnorm(v) / (drive + obs);
}

Shifted1DFamily Shifted1DFamily::lambda_form(double h, const VectorXd& w) {
    Shifted1DFamily f;
    f.n_ = static_cast<int>(w.size());
    SpectralGrid1D g(f.n_);
    if (f.n_ % 2 == 0 && grid_even(w)) {
        const MatrixXcd t = lambda_form_matrix(g, h, symmetrized(w));
        for (auto& blk : parity_blocks(t))
            f.blocks_.push_back(lapack::hessenberg_form(std::move(blk)));
    } else {
        f.blocks_.push_back(
            lapack::hessenberg_form(lambda_form_matrix(g, h, w)));
    }
    return f;
}

Shifted1DFamily Shifted1DFamily::reduced_form(double h, const VectorXd& w,
                                              const VectorXd& kappa) {
    Shifted1DFamily f;
    f.n_ = static_cast<int>(w.size());
    SpectralGrid1D g(f.n_);
    const bool driftless =
        kappa.size() == 0 || kappa.cwiseAbs().maxCoeff() == 0.0 ||
        w.cwiseAbs().maxCoeff() == 0.0;
    const VectorXd kap =
        kappa.size() == 0 ? VectorXd::Zero(f.n_).eval() : kappa;
    if (f.n_ % 2 == 0 && driftless && grid_even(w)) {
        const MatrixXcd t =
            reduced_form_matrix(g, h, symmetrized(w), VectorXd::Zero(f.n_));
        for (auto& blk : parity_blocks(t))
            f.blocks_.push_back(lapack::hessenberg_form(std::move(blk)));
    } else {
        f.blocks_.push_back(
            lapack::hessenberg_form(reduced_form_matrix(g, h, w, kap)));
    }
    return f;
}

double Shifted1DFamily::sigma_min(double shift, double rtol) const {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& blk : blocks_)
        s = std::min(s,
                     lapack::hessenberg_sigma_min(blk, Cplx(shift, 0.0), rtol));
    return s;
}

double resolvent_1d_norm(double h, double lambda, const VectorXd& w,
                         double rtol) {
    const Shifted1DFamily fam = Shifted1DFamily::lambda_form(h, w);
    return 1.0 / fam.sigma_min(lambda * lambda, rtol);
}

VectorXcd solve_lambda_form(double h, double lambda, const VectorXd& w,
                            const VectorXcd& r) {
    const int n = static_cast<int>(w.size());
    SpectralGrid1D g(n);
    MatrixXcd t = lambda_form_matrix(g, h, w);
    t.diagonal().array() -= lambda * lambda;
    lapack::Lu lu(std::move(t));
    return lu.solve(r);
}

double weighted_identity_residual(const ReducedProblem1D& p,
                                  const Eigen::VectorXcd& v,
                                  const Eigen::VectorXd& w) {
    const int n = p.grid_n();
    if (v.size() != n || w.size() != n)
        throw InvalidInput("weighted_identity_residual: size mismatch");
    SpectralGrid1D g(n);

    const VectorXcd vp = g.deriv(v);
    const VectorXcd wpp = g.deriv2(w.cast<Cplx>());
    VectorXcd gw(n);
    for (int i = 0; i < n; ++i)
        gw[i] = w[i] * p.kappa[i] * std::sqrt(p.W[i]);
    const VectorXcd gwp = g.deriv(gw);

    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
        lhs += w[i] * std::norm(p.h * vp[i]);
        lhs += (-0.5 * p.h * p.h * std::real(wpp[i]) - p.E * w[i]) *
               std::norm(v[i]);
        lhs -= 0.5 * p.h * p.h * std::real(gwp[i]) * std::norm(v[i]);
    }
    double rhs = 0.0;
    for (int i = 0; i < n; ++i)
        rhs += w[i] * std::real(p.r[i] * std::conj(v[i]));
    lhs /= n;
    rhs /= n;
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

MorawetzWeights build_morawetz_weights(
    const std::vector<std::pair<double, double>>& intervals, double h,
    double delta, std::vector<double> epsilons, int grid_n) {
    if (intervals.empty())
        throw InvalidInput("build_morawetz_weights: empty interval list");
    auto sorted = intervals;
    std::sort(sorted.begin(), sorted.end());
    for (size_t j = 0; j < sorted.size(); ++j) {
        const auto& [a, b] = sorted[j];
        if (!(a > -kPi && b < kPi && a < b))
            throw InvalidInput("build_morawetz_weights: bad interval");
        if (j > 0 && sorted[j - 1].second > a)
            throw InvalidInput("build_morawetz_weights: overlapping intervals");
    }
    const size_t l = sorted.size();
    const double hdelta = std::pow(h, delta);
    std::vector<double> shells(l), eps(l);
    for (size_t j = 0; j < l; ++j) {
        const double len = sorted[j].second - sorted[j].first;
        shells[j] = std::min(kTwoPi * hdelta, 0.25 * len);
        eps[j] = j < epsilons.size() ? epsilons[j] : len / 3.0;
        if (!(eps[j] > shells[j] && eps[j] < 0.5 * len))
            throw InvalidInput(
                "build_morawetz_weights: epsilon must lie between the shell "
                "width and half the interval");
    }

    // M balances the exact integral of Psi to zero.
    double positive_mass = kTwoPi;  // start from Psi = 1 everywhere outside
    double middle_len = 0.0;
    for (size_t j = 0; j < l; ++j) {
        const double len = sorted[j].second - sorted[j].first;
        positive_mass -= len;                                // remove interior
        positive_mass += 2.0 * shells[j] * std::pow(h, -delta);
        positive_mass += 2.0 * (eps[j] - shells[j]);
        middle_len += len - 2.0 * eps[j];
    }
    const double m_const = positive_mass / middle_len;

    auto psi_of = [&](double x) {
        for (size_t j = 0; j < l; ++j) {
            const auto& [a, b] = sorted[j];
            if (x < a || x >= b) continue;
            if (x < a + shells[j] || x >= b - shells[j])
                return std::pow(h, -delta);
            if (x < a + eps[j] || x >= b - eps[j]) return 1.0;
            return -m_const;
        }
        return 1.0;
    };

    // Exact primitive of the piecewise-constant Psi via its breakpoints.
    std::vector<double> brk{-kPi};
    for (size_t j = 0; j < l; ++j) {
        const auto& [a, b] = sorted[j];
        for (double t : {a, a + shells[j], a + eps[j], b - eps[j],
                         b - shells[j], b})
            brk.push_back(t);
    }
    brk.push_back(kPi);
    std::sort(brk.begin(), brk.end());
    auto phi_raw = [&](double x) {  // integral from -pi to x
        double acc = 0.0;
        for (size_t i = 0; i + 1 < brk.size() && brk[i] < x; ++i) {
            const double hi = std::min(brk[i + 1], x);
            acc += psi_of(0.5 * (brk[i] + std::min(brk[i + 1], x))) *
                   (hi - brk[i]);
        }
        return acc;
    };
    const double phi0 = phi_raw(0.0);

    MorawetzWeights mw;
    mw.M = m_const;
    mw.integral_Psi = phi_raw(kPi);
    mw.shell_widths = shells;
    mw.V0.resize(grid_n);
    mw.chi.resize(grid_n);
    mw.Psi.resize(grid_n);
    mw.Phi.resize(grid_n);
    mw.Theta.resize(grid_n);
    const double h3d = std::pow(h, 3.0 * delta);
    for (int i = 0; i < grid_n; ++i) {
        const double x = -kPi + kTwoPi * i / grid_n;
        double v0 = 0.0;
        for (const auto& [a, b] : sorted)
            v0 += std::max(0.0, (x - a) * (b - x));
        mw.V0[i] = v0;
        const double s = v0 * v0 * v0 / h3d;
        mw.chi[i] = 1.0 - smooth_transition(s - 1.0);
        mw.Psi[i] = psi_of(x);
        mw.Phi[i] = phi_raw(x) - phi0;
        mw.Theta[i] = mw.Psi[i] > 0.0 ? mw.Psi[i] : 0.0;
        mw.sup_Phi = std::max(mw.sup_Phi, std::abs(mw.Phi[i]));
    }
    return mw;
}

MorawetzCheck morawetz_check(const MorawetzWeights& mw, double h,
                             double lambda, const Eigen::VectorXd& w,
                             const Eigen::VectorXcd& v,
                             const Eigen::VectorXcd& r) {
    const int n = static_cast<int>(v.size());
    SpectralGrid1D g(n);
    VectorXcd v1(n), chiv(n);
    for (int i = 0; i < n; ++i) v1[i] = mw.chi[i] * v[i];
    const VectorXcd v1p = g.deriv(v1);
    const VectorXcd chip = g.deriv(mw.chi.cast<Cplx>());
    const VectorXcd chipp = g.deriv2(mw.chi.cast<Cplx>());

    MorawetzCheck out;
    double lhs = 0.0;
    for (int i = 0; i < n; ++i)
        lhs += mw.Theta[i] *
               (std::norm(v1p[i]) + lambda * lambda * std::norm(v1[i]));
    lhs /= n;

    // rtilde = chi r - 2 (chi' v)' + chi'' v
    VectorXcd chipv(n);
    for (int i = 0; i < n; ++i) chipv[i] = chip[i] * v[i];
    const VectorXcd chipv_p = g.deriv(chipv);
    VectorXcd rtilde(n);
    for (int i = 0; i < n; ++i)
        rtilde[i] = mw.chi[i] * r[i] - 2.0 * chipv_p[i] + chipp[i] * v[i];

    Cplx term1(0.0, 0.0);
    double term2 = 0.0;
    for (int i = 0; i < n; ++i) {
        term1 += mw.Phi[i] * w[i] * v1[i] * std::conj(v1p[i]);
        term2 += mw.Phi[i] * std::real(std::conj(v1p[i]) * rtilde[i]);
    }
    out.lhs = lhs;
    out.rhs = std::abs(term1) / (h * n) + std::abs(term2) / n;
    out.ratio = out.lhs / (out.rhs + 1e-300);
    return out;
}

double geometric_control_ratio(const Eigen::VectorXcd& v, double lambda,
                               const Eigen::VectorXcd& f1,
                               const Eigen::VectorXcd& f2,
                               std::pair<double, double> interval) {
    const int n = static_cast<int>(v.size());
    SpectralGrid1D g(n);
    const VectorXcd f2hat = g.fft(f2);
    double hm1 = 0.0;
    for (int b = 0; b < n; ++b) {
        const double k = g.bin_wavenumber(b);
        hm1 += std::norm(f2hat[b]) / (1.0 + k * k);
    }
    double vloc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.node(i);
        if (x >= interval.first && x <= interval.second) vloc += std::norm(v[i]);
    }
    vloc = std::sqrt(vloc / n);
    const double denom =
        qnorm(f1) / lambda + std::sqrt(hm1) + vloc;
    return qnorm(v) / (denom + 1e-300);
}

}  // namespace torwave
