#pragma once

#include <array>
#include <cmath>
#include <span>

#include "ctxkernel/errors.hpp"

namespace ctxk::kernelfit {

struct FitPoint {
    double theta = 0.0;
    double delta_e = 0.0;
    double sem = 0.0; // <= 0 means no per-point error (unweighted fit)
};

struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;
    double reduced_chi_squared = 0.0;
    std::array<std::array<double, 2>, 2> covariance{};
    bool weighted = false;
};

// Weighted least squares for the two-parameter model
//   delta_e = a (1 - cos theta) + b.
// Weights are 1/sem^2 when every point carries a positive sem, unit weights
// otherwise. Closed-form normal equations; dof = n - 2.
inline FitResult fit_delta_curve(std::span<const FitPoint> points) {
    const std::size_t n = points.size();
    if (n < 3)
        throw rank_deficient_error("fit_delta_curve: need at least 3 points");

    bool weighted = true;
    for (const FitPoint& p : points)
        if (!(p.sem > 0.0))
            weighted = false;

    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const FitPoint& p : points) {
        double w = weighted ? 1.0 / (p.sem * p.sem) : 1.0;
        double x = 1.0 - std::cos(p.theta);
        sw += w;
        sx += w * x;
        sy += w * p.delta_e;
        sxx += w * x * x;
        sxy += w * x * p.delta_e;
    }
    double det = sw * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * sw * sxx || det <= 0.0)
        throw rank_deficient_error("fit_delta_curve: design matrix is rank deficient "
                                   "(all theta give the same 1-cos theta)");

    FitResult fit;
    fit.weighted = weighted;
    fit.a = (sw * sxy - sx * sy) / det;
    fit.b = (sxx * sy - sx * sxy) / det;

    // (X^T W X)^-1
    fit.covariance[0][0] = sw / det;
    fit.covariance[0][1] = fit.covariance[1][0] = -sx / det;
    fit.covariance[1][1] = sxx / det;

    double chi2 = 0.0;
    double ss_res = 0.0, ss_tot = 0.0;
    const double y_mean = sy / sw;
    for (const FitPoint& p : points) {
        double x = 1.0 - std::cos(p.theta);
        double r = p.delta_e - (fit.a * x + fit.b);
        double w = weighted ? 1.0 / (p.sem * p.sem) : 1.0;
        chi2 += w * r * r;
        ss_res += w * r * r;
        ss_tot += w * (p.delta_e - y_mean) * (p.delta_e - y_mean);
    }
    const double dof = static_cast<double>(n) - 2.0;
    fit.reduced_chi_squared = dof > 0.0 ? chi2 / dof : 0.0;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    if (!weighted) {
        // scale the covariance by the residual variance estimate
        double s2 = dof > 0.0 ? ss_res / dof : 0.0;
        for (auto& row : fit.covariance)
            for (double& v : row)
                v *= s2;
    }
    return fit;
}

} // namespace ctxk::kernelfit
