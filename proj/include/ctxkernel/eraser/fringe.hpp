#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctxkernel/errors.hpp"
#include "ctxkernel/simcore/counts.hpp"

namespace ctxk::eraser {

struct PhasePoint {
    double phi = 0.0;
    double value = 0.0;
    double sem = 0.0;
};

// Fringe samples for one (lambda, branch) cell. `harmonic` is how many times
// the analysis phase enters the fringe argument (3 for the GHZ register where
// the phase is applied per qubit, 1 for the compact probe).
struct FringeScan {
    double lambda = 0.0;
    std::string branch;
    int harmonic = 1;
    std::vector<PhasePoint> points;
    std::optional<int> conditioned_on; // marker outcome, when conditioned
};

struct FringeFit {
    double amplitude = 0.0;
    double phase = 0.0; // offset phi0 of amplitude * cos(k phi - phi0)
    double offset = 0.0;
};

// Least-squares fit of value(phi) = a cos(k phi) + b sin(k phi) + c via the
// 3x3 normal equations; amplitude = hypot(a, b).
inline FringeFit fit_fringe(std::span<const PhasePoint> points, int harmonic) {
    if (points.size() < 4)
        throw rank_deficient_error("fit_fringe: need at least 4 phase points");
    {
        std::vector<double> distinct;
        for (const PhasePoint& p : points) {
            bool seen = false;
            for (double d : distinct)
                if (std::abs(d - p.phi) < 1e-12)
                    seen = true;
            if (!seen)
                distinct.push_back(p.phi);
        }
        if (distinct.size() < 4)
            throw rank_deficient_error("fit_fringe: need at least 4 distinct phases");
    }

    double m[3][3] = {};
    double rhs[3] = {};
    for (const PhasePoint& p : points) {
        double c = std::cos(harmonic * p.phi);
        double s = std::sin(harmonic * p.phi);
        double row[3] = {c, s, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                m[i][j] += row[i] * row[j];
            rhs[i] += row[i] * p.value;
        }
    }
    // Gaussian elimination with partial pivoting
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col]))
                piv = r;
        std::swap(perm[col], perm[piv]);
        double diag = m[perm[col]][col];
        if (std::abs(diag) < 1e-10)
            throw rank_deficient_error("fit_fringe: degenerate phase grid");
        for (int r = col + 1; r < 3; ++r) {
            double f = m[perm[r]][col] / diag;
            for (int j = col; j < 3; ++j)
                m[perm[r]][j] -= f * m[perm[col]][j];
            rhs[perm[r]] -= f * rhs[perm[col]];
        }
    }
    double sol[3];
    for (int row = 2; row >= 0; --row) {
        double acc = rhs[perm[row]];
        for (int j = row + 1; j < 3; ++j)
            acc -= m[perm[row]][j] * sol[j];
        sol[row] = acc / m[perm[row]][row];
    }

    FringeFit fit;
    fit.amplitude = std::hypot(sol[0], sol[1]);
    fit.phase = std::atan2(sol[1], sol[0]);
    fit.offset = sol[2];
    return fit;
}

// fitted fringe amplitude, clamped into [0, 1 + 1e-9]
inline double visibility_from_scan(const FringeScan& scan) {
    double v = fit_fringe(scan.points, scan.harmonic).amplitude;
    if (v < 0.0)
        v = 0.0;
    if (v > 1.0 + 1e-9)
        v = 1.0 + 1e-9;
    return v;
}

struct ConditionalVisibility {
    std::map<int, double> by_outcome;       // fitted V per marker outcome
    std::map<int, double> phase_by_outcome; // fringe phase offsets
    std::map<int, double> weights;          // marker outcome probabilities
    double weighted_mean = 0.0;
    bool missing_stratum = false;
};

// Per-outcome visibilities with their outcome-probability weights. A stratum
// below the weight floor is flagged rather than fitted.
inline ConditionalVisibility conditional_visibility(std::span<const FringeScan> scans,
                                                    const std::map<int, double>& weights,
                                                    double weight_floor = 1e-9) {
    if (scans.empty())
        throw invalid_query_error("conditional_visibility: no conditioned scans");
    ConditionalVisibility out;
    out.weights = weights;
    double wsum = 0.0;
    for (const FringeScan& scan : scans) {
        if (!scan.conditioned_on)
            throw invalid_query_error("conditional_visibility: scan is not conditioned");
        int m = *scan.conditioned_on;
        auto wit = weights.find(m);
        double w = wit == weights.end() ? 0.0 : wit->second;
        if (w < weight_floor) {
            out.missing_stratum = true;
            continue;
        }
        FringeFit fit = fit_fringe(scan.points, scan.harmonic);
        out.by_outcome[m] = std::min(fit.amplitude, 1.0 + 1e-9);
        out.phase_by_outcome[m] = fit.phase;
        out.weighted_mean += w * out.by_outcome[m];
        wsum += w;
    }
    if (out.by_outcome.empty())
        throw invalid_query_error("conditional_visibility: every stratum is empty");
    if (wsum > 0.0)
        out.weighted_mean /= wsum;
    if (out.by_outcome.size() < 2)
        out.missing_stratum = true;
    return out;
}

} // namespace ctxk::eraser
