#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace torwave {

/** Ordinary least squares fit summary, optionally compared against a
 * predicted slope. pass <=> |slope - predicted| <= tolerance and r2 >= 0.98. */
struct FitReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    int n_points = 0;
    double predicted = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    bool has_prediction = false;
    bool pass = false;

    FitReport& against(double predicted_slope, double tol);
};

/** OLS on the raw coordinates. */
FitReport linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y);

/** OLS on (log x, log y); an optional window restricts the x range.
 * Requires >= 4 points inside the window, all coordinates positive. */
FitReport loglog_fit(const std::vector<double>& x,
                     const std::vector<double>& y,
                     std::optional<std::pair<double, double>> window = {});

}  // namespace torwave
