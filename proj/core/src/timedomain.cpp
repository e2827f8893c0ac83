#include "torwave/timedomain.hpp"

#include <cmath>

#include "torwave/errors.hpp"
#include "torwave/mathutil.hpp"

namespace torwave {

double wave_energy(const FourierField2D& u, const FourierField2D& ut) {
    return 0.5 * u.grad_norm_sq() + 0.5 * ut.coeffs.squaredNorm();
}

WaveState make_wave_state(FourierField2D u, FourierField2D ut, double t) {
    WaveState s;
    s.energy = wave_energy(u, ut);
    s.u = std::move(u);
    s.ut = std::move(ut);
    s.time = t;
    return s;
}

double sobolev_h2h1_norm(const FourierField2D& u, const FourierField2D& ut) {
    double acc = 0.0;
    for (int ky = -u.K; ky <= u.K; ++ky)
        for (int kx = -u.K; kx <= u.K; ++kx) {
            const double k2 = double(kx) * kx + double(ky) * ky;
            acc += (1.0 + k2) * (1.0 + k2) * std::norm(u.at(kx, ky));
            acc += (1.0 + k2) * std::norm(ut.at(kx, ky));
        }
    return std::sqrt(acc);
}

WaveStepper::WaveStepper(const DampingProfile& a, int K) : K_(K) {
    if (K < 1) throw InvalidInput("WaveStepper: K < 1");
    grid_ = std::make_shared<SpectralGrid2D>(K);
    a_samples_ = sample_on_grid(
        [&a](double x, double y) { return a(x, y); }, *grid_);
    if (a_samples_.minCoeff() < 0.0)
        throw InvalidInput("WaveStepper: damping must be nonnegative");
    const double omega_max = std::sqrt(2.0) * K;
    dt_bound_ = 0.5 / omega_max;
}

void WaveStepper::refresh_tables(double dt) const {
    const int m = 2 * K_ + 1;
    cos_.resize(m * m);
    sinc_.resize(m * m);
    wsin_.resize(m * m);
    for (int ky = -K_; ky <= K_; ++ky)
        for (int kx = -K_; kx <= K_; ++kx) {
            const int i = (kx + K_) + m * (ky + K_);
            const double w = std::sqrt(double(kx) * kx + double(ky) * ky);
            if (w == 0.0) {
                cos_[i] = 1.0;
                sinc_[i] = dt;  // free mode: u += dt * u_t
                wsin_[i] = 0.0;
            } else {
                cos_[i] = std::cos(w * dt);
                sinc_[i] = std::sin(w * dt) / w;
                wsin_[i] = w * std::sin(w * dt);
            }
        }
    damp_half_ = (-0.5 * dt * a_samples_.array()).exp();
    cached_dt_ = dt;
}

WaveState WaveStepper::step(const WaveState& s, double dt) const {
    if (s.u.K != K_) throw InvalidInput("WaveStepper: truncation mismatch");
    if (!(dt > 0.0) || dt > dt_bound_)
        throw InvalidInput("WaveStepper: dt exceeds the accuracy bound " +
                           std::to_string(dt_bound_));
    if (dt != cached_dt_) refresh_tables(dt);

    WaveState out = s;
    // damping half-step: exact pointwise decay of u_t
    out.ut.coeffs = grid_->multiply(damp_half_, out.ut.coeffs);
    // exact rotation of the undamped system
    for (int i = 0; i < out.u.coeffs.size(); ++i) {
        const Cplx uu = out.u.coeffs[i];
        const Cplx vv = out.ut.coeffs[i];
        out.u.coeffs[i] = cos_[i] * uu + sinc_[i] * vv;
        out.ut.coeffs[i] = -wsin_[i] * uu + cos_[i] * vv;
    }
    // second damping half-step
    out.ut.coeffs = grid_->multiply(damp_half_, out.ut.coeffs);
    out.time = s.time + dt;
    out.energy = wave_energy(out.u, out.ut);
    return out;
}

WaveState step(const WaveState& s, const DampingProfile& a, double dt) {
    return WaveStepper(a, s.u.K).step(s, dt);
}

TrajectoryRecord integrate(const WaveStepper& stepper, WaveState state,
                           double dt, int n_steps, int sample_stride) {
    TrajectoryRecord rec;
    rec.dt_sample = dt * sample_stride;
    const Eigen::VectorXd& a = stepper.a_samples();

    auto damping_rate = [&](const WaveState& s) {
        // integral a |u_t|^2 by grid quadrature
        const Eigen::VectorXcd vals = stepper.grid().to_grid(s.ut.coeffs);
        double acc = 0.0;
        for (int i = 0; i < vals.size(); ++i) acc += a[i] * std::norm(vals[i]);
        return acc / vals.size();
    };

    rec.t.push_back(state.time);
    rec.energy.push_back(state.energy);
    rec.damping_rate.push_back(damping_rate(state));
    for (int i = 1; i <= n_steps; ++i) {
        state = stepper.step(state, dt);
        if (i % sample_stride == 0) {
            rec.t.push_back(state.time);
            rec.energy.push_back(state.energy);
            rec.damping_rate.push_back(damping_rate(state));
        }
    }
    return rec;
}

double dissipation_identity_residual(const TrajectoryRecord& rec) {
    const int n = static_cast<int>(rec.t.size());
    if (n < 3) throw InvalidInput("dissipation residual: need >= 3 samples");
    const double dt = rec.dt_sample;
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double dedt = (rec.energy[i + 1] - rec.energy[i - 1]) / (2 * dt);
        const double d = rec.damping_rate[i];
        const double res = std::abs(dedt + d) / (std::abs(d) + 1e-300);
        worst = std::max(worst, res);
    }
    return worst;
}

DecayRecord measure_decay(const DampingProfile& damping,
                          const WaveState& initial, double T, double dt,
                          int sample_stride) {
    DecayRecord rec;
    rec.initial_h2h1 = sobolev_h2h1_norm(initial.u, initial.ut);
    WaveStepper stepper(damping, initial.u.K);
    WaveState s = initial;
    rec.t.push_back(s.time);
    rec.energy.push_back(s.energy);
    const int n_steps = static_cast<int>(std::ceil(T / dt));
    rec.monotone = true;
    double prev = s.energy;
    for (int i = 1; i <= n_steps; ++i) {
        s = stepper.step(s, dt);
        if (s.energy > prev * (1.0 + 1e-10)) rec.monotone = false;
        prev = s.energy;
        if (i % sample_stride == 0) {
            rec.t.push_back(s.time);
            rec.energy.push_back(s.energy);
        }
    }

    // Late-window fit of log(E^{1/2}/||init||) vs log t; an exponential
    // tail makes the log-log model fit worse than the log-linear one.
    std::vector<double> ts, ys, lin_x;
    for (size_t i = 0; i < rec.t.size(); ++i) {
        if (rec.t[i] < T / 4.0 || rec.t[i] > T) continue;
        if (rec.energy[i] <= 0.0) continue;
        ts.push_back(rec.t[i]);
        ys.push_back(std::sqrt(rec.energy[i]) / rec.initial_h2h1);
        lin_x.push_back(rec.t[i]);
    }
    if (ts.size() >= 4) {
        rec.alpha_fit = loglog_fit(ts, ys);
        rec.alpha = -rec.alpha_fit.slope;
        std::vector<double> ly(ys.size());
        for (size_t i = 0; i < ys.size(); ++i) ly[i] = std::log(ys[i]);
        const FitReport lin = linear_fit(lin_x, ly);
        rec.exp_flag = lin.r2 > rec.alpha_fit.r2;
    }
    return rec;
}

WaveState trapped_packet(int K) {
    FourierField2D u = FourierField2D::zero(K, 1.0);
    FourierField2D ut = FourierField2D::zero(K, 1.0);
    for (int n = 1; n <= K / 2; ++n) {
        const double w = 1.0 / (1.0 + double(n) * n);
        u.at(0, n) = w;
        u.at(0, -n) = w;  // real-valued packet
    }
    const double nrm = sobolev_h2h1_norm(u, ut);
    u.coeffs /= nrm;
    return make_wave_state(std::move(u), std::move(ut));
}

}  // namespace torwave
