#pragma once

// Nelder-Mead simplex search on the unit box [0, 1]^n. Trial points are
// projected back onto the box, so every evaluated point is feasible.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace mcf {

struct NelderMeadOptions {
    double initial_step = 0.15;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double improvement_tolerance = 1e-12;  // relative improvement counted as progress
    int patience = 30;                     // iterations without progress before stopping
    double min_diameter = 1e-10;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/// Minimizes `f` from `start` using at most `budget` evaluations.
/// `f` may return +inf for infeasible points; those are treated as worst.
inline NelderMeadResult nelder_mead_box(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> start, int budget, const NelderMeadOptions& opt = {}) {
    const std::size_t n = start.size();
    NelderMeadResult res;
    auto clamp01 = [](std::vector<double> v) {
        for (auto& c : v) c = std::clamp(c, 0.0, 1.0);
        return v;
    };
    auto eval = [&](const std::vector<double>& x) {
        ++res.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> pts{clamp01(start)};
    for (std::size_t i = 0; i < n; ++i) {
        auto p = pts[0];
        // Step inward when the start sits on the upper face.
        p[i] += (p[i] + opt.initial_step <= 1.0) ? opt.initial_step : -opt.initial_step;
        pts.push_back(clamp01(p));
    }
    std::vector<double> vals;
    for (const auto& p : pts) {
        if (res.evaluations >= budget) break;
        vals.push_back(eval(p));
    }
    if (vals.size() < pts.size()) {
        pts.resize(vals.size());
        const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
        res.x = pts[static_cast<std::size_t>(best)];
        res.value = vals[static_cast<std::size_t>(best)];
        return res;
    }

    double best_seen = *std::min_element(vals.begin(), vals.end());
    int stale = 0;
    std::vector<std::size_t> order(n + 1);
    while (res.evaluations < budget) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        const std::size_t ib = order.front(), iw = order.back(), is = order[n - 1];

        double diam = 0.0;
        for (std::size_t k = 0; k <= n; ++k)
            for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, std::abs(pts[k][j] - pts[ib][j]));
        if (diam < opt.min_diameter || stale >= opt.patience) {
            res.converged = true;
            break;
        }
        ++res.iterations;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k)
            if (k != iw)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[k][j] / static_cast<double>(n);
        auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (pts[iw][j] - centroid[j]);
            return clamp01(std::move(p));
        };

        const auto xr = along(-opt.reflection);
        const double fr = eval(xr);
        if (fr < vals[ib]) {
            if (res.evaluations < budget) {
                const auto xe = along(-opt.reflection * opt.expansion);
                const double fe = eval(xe);
                if (fe < fr) {
                    pts[iw] = xe;
                    vals[iw] = fe;
                } else {
                    pts[iw] = xr;
                    vals[iw] = fr;
                }
            } else {
                pts[iw] = xr;
                vals[iw] = fr;
            }
        } else if (fr < vals[is]) {
            pts[iw] = xr;
            vals[iw] = fr;
        } else if (res.evaluations < budget) {
            const bool outside = fr < vals[iw];
            const auto xc = along(outside ? -opt.reflection * opt.contraction : opt.contraction);
            const double fc = eval(xc);
            if (fc < std::min(fr, vals[iw])) {
                pts[iw] = xc;
                vals[iw] = fc;
            } else {
                for (std::size_t k = 0; k <= n && res.evaluations < budget; ++k) {
                    if (k == ib) continue;
                    for (std::size_t j = 0; j < n; ++j) pts[k][j] = pts[ib][j] + opt.shrink * (pts[k][j] - pts[ib][j]);
                    pts[k] = clamp01(pts[k]);
                    vals[k] = eval(pts[k]);
                }
            }
        }

        const double now = *std::min_element(vals.begin(), vals.end());
        if (now < best_seen - opt.improvement_tolerance * std::abs(best_seen)) {
            best_seen = now;
            stale = 0;
        } else {
            ++stale;
        }
    }
    const auto best = std::min_element(vals.begin(), vals.end()) - vals.begin();
    res.x = pts[static_cast<std::size_t>(best)];
    res.value = vals[static_cast<std::size_t>(best)];
    return res;
}

}  // namespace mcf
