#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torwave/damping.hpp"

namespace torwave {

/** Serializable damping description (kind, order, geometry). */
struct DampingConfig {
    std::string kind = "disk";  // disk | strip | constant | zero
    double beta = 5.0;          // disk order
    double gamma = 5.0;         // strip order
    double cx = 0.0, cy = 0.0, r0 = 1.0;
    std::vector<std::pair<double, double>> intervals{{-1.0, 1.0}};
    double value = 1.0;  // constant damping level
};

DampingProfile make_damping(const DampingConfig& cfg);

/** One experiment run: kind, damping, parameter grids, tolerances, output. */
struct ExperimentConfig {
    std::string experiment;  // resolvent2d | resolvent1d | averaging |
                             // normalform | decay | generator-spectrum
    DampingConfig damping;

    std::vector<double> h_list;   // explicit h grid (descending preferred)
    double k_factor = 4.0;        // K = ceil(k_factor / h) + k_offset
    int k_offset = 0;
    std::string method = "krylov";  // krylov | dense
    int grid_n = 8192;              // 1D / averaging grid
    int trunc = 32;                 // K for decay / generator-spectrum
    int lambda_per_decade = 40;
    double c1 = 1.0;
    std::pair<double, double> window{1e-3, 1e-1};  // fit window
    double tolerance = 0.1;
    double T = 200.0;
    double dt = 1e-3;

    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
};

/** Parse a config JSON file. Throws InvalidInput naming the offending field. */
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace torwave
