#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "torwave/config.hpp"
#include "torwave/fit.hpp"

namespace torwave {

/** One evaluated point of a 1D resolvent scan. */
struct OneDPoint {
    double h = 0.0;
    double lambda = 0.0;  // or sqrt(E)/h for the reduced form
    double value = 0.0;   // resolvent norm (lambda form) or sigma_min (E form)
};

struct OneDSweepOptions {
    int grid_n = 4096;    // dense collocation grid for reported values
    int coarse_n = 1024;  // bracketing scan resolution
    int per_decade = 40;
    double c1 = 1.0;
    int refine_points = 12;
    double refine_span = 1.4;  // multiplicative window around the argmax
    double rtol = 1e-6;
};

struct OneDSweepResult {
    std::vector<OneDPoint> best;      // one per h
    std::vector<OneDPoint> evaluated; // every dense evaluation
    FitReport fit;                    // log best-value vs log(1/h)
};

/** max over the lambda grid in [sqrt(c1), h^{-(1-delta)/2}] of
 * ||(-d^2 - lambda^2 + i h^{-1} W)^{-1}||, for each h. The grid is
 * logarithmic with per_decade points, refined once around the argmax; a
 * coarse collocation scan brackets the argmax before the dense pass. */
OneDSweepResult resolvent_1d_sweep(const std::function<double(double)>& w_of_x,
                                   const std::vector<double>& h_list,
                                   double delta, const OneDSweepOptions& opts);

/** min over the E grid of sigma_min(-h^2 d^2 - E + i h W + h^2 kappa
 * sqrt(W) d), for each h; E ranges over (h lambda)^2 with the same lambda
 * grid. kappa may be empty (pure reduction). Fits log min-sigma vs log h. */
OneDSweepResult reduced_sigma_sweep(
    const std::function<double(double)>& w_of_x,
    const std::function<double(double)>& kappa_of_x,
    const std::vector<double>& h_list, double delta,
    const OneDSweepOptions& opts);

struct ExperimentResult {
    int exit_code = 0;  // 0 ok, 1 config error, 2 numerical failure (partial)
    std::string summary_json;
    std::vector<std::string> files_written;
};

/** Execute the configured experiment; writes CSV + JSON summary + a short
 * text report under cfg.out_dir. Deterministic given (config, seed). */
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace torwave
