#include "torwave/fit.hpp"

#include <cmath>

#include "torwave/errors.hpp"

namespace torwave {

FitReport& FitReport::against(double predicted_slope, double tol) {
    predicted = predicted_slope;
    tolerance = tol;
    abs_diff = std::abs(slope - predicted_slope);
    has_prediction = true;
    pass = abs_diff <= tol && r2 >= 0.98;
    return *this;
}

FitReport linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size())
        throw InvalidInput("linear_fit: need >= 2 matching points");
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidInput("linear_fit: degenerate abscissae");
    FitReport rep;
    rep.n_points = n;
    rep.slope = sxy / sxx;
    rep.intercept = my - rep.slope * mx;
    double ss_res = 0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (rep.intercept + rep.slope * x[i]);
        ss_res += e * e;
    }
    rep.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    rep.slope_stderr =
        n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
    return rep;
}

FitReport loglog_fit(const std::vector<double>& x,
                     const std::vector<double>& y,
                     std::optional<std::pair<double, double>> window) {
    if (x.size() != y.size()) throw InvalidInput("loglog_fit: size mismatch");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size(); ++i) {
        if (window && (x[i] < window->first || x[i] > window->second)) continue;
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw InvalidInput("loglog_fit: nonpositive value");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 4)
        throw InvalidInput("loglog_fit: fewer than 4 points in the window");
    return linear_fit(lx, ly);
}

}  // namespace torwave
