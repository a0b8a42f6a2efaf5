#pragma once

// Derivative-free fit of a trench-assisted profile to a target (tau0, D, S).
//
// The four free parameters (a1, delta1, a2, w) are mapped to the unit box.
// Latin-hypercube seeds are scored first; Nelder-Mead then runs from the best
// point and restarts from the incumbent or the next-best seeds within its share
// of the budget. Because the anchor-delay weight makes the valley very narrow,
// a Levenberg-Marquardt polish on finite-difference Jacobians finishes the fit.

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/mode_solver.hpp"
#include "mcf_ttdl/nelder_mead.hpp"
#include "mcf_ttdl/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace mcf {

struct Range {
    double min = 0.0;
    double max = 0.0;
    double span() const { return max - min; }
};

/// Search box for trench profiles. Defaults are the published design ranges.
struct ProfileSearchBox {
    Range a1_um{3.42, 4.98};
    Range delta1_pct{0.3333, 0.3864};
    Range a2_um{2.42, 5.48};
    Range w_um{2.61, 5.41};
    double delta2_pct = 1.0;

    std::array<Range, 4> ranges() const { return {a1_um, delta1_pct, a2_um, w_um}; }

    static ProfileSearchBox point(const TrenchProfile& p) {
        return {{p.a1_um, p.a1_um}, {p.delta1_pct, p.delta1_pct}, {p.a2_um, p.a2_um}, {p.w_um, p.w_um}, p.delta2_pct};
    }

    bool contains(const TrenchProfile& p) const {
        auto in = [](Range r, double v) { return v >= r.min && v <= r.max; };
        return in(a1_um, p.a1_um) && in(delta1_pct, p.delta1_pct) && in(a2_um, p.a2_um) && in(w_um, p.w_um) &&
               p.delta2_pct == delta2_pct;
    }
};

/// A collapsed dimension (min == max) is allowed and held fixed.
inline void check(const ProfileSearchBox& b) {
    for (const auto& r : b.ranges()) {
        detail::require_finite(r.min, "box bound");
        detail::require_finite(r.max, "box bound");
        detail::require(r.min <= r.max, ErrorCode::InvalidArgument, "box requires min <= max in every dimension");
        detail::require(r.min > 0.0, ErrorCode::InvalidArgument, "box bounds must be > 0");
    }
    detail::require(b.delta2_pct > 0.0, ErrorCode::InvalidArgument, "delta2 must be > 0");
}

struct FitWeights {
    double tau0 = 1.0 / (0.01 * 0.01);
    double d = 1.0 / (0.05 * 0.05);
    double s = 1.0 / (0.005 * 0.005);
};

struct FitOptions {
    double lambda0_nm = 1550.0;
    double band_min_nm = 1500.0;
    double band_max_nm = 1600.0;
    double stencil_step_nm = kDefaultStencilStepNm;
    SolverNumerics numerics{};
    FitWeights weights{};
    int budget = 500;        // dispersion evaluations, seeds included
    double simplex_share = 0.5;  // fraction of the budget for the simplex phase
    int seeds = 8;
    std::uint64_t seed = 0x5eed2017ULL;
    NelderMeadOptions simplex{};
    unsigned threads = 1;    // seed evaluations
};

struct FitResult {
    TrenchProfile profile;
    CoreDispersion achieved;
    double objective = 0.0;
    double initial_objective = 0.0;  // best Latin-hypercube seed
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

/// Weighted residuals sqrt(w_i) * (achieved_i - target_i) for (tau0, D, S).
inline std::array<double, 3> fit_residuals(const CoreDispersion& got, const CoreDispersion& target,
                                           const FitWeights& w) {
    return {std::sqrt(w.tau0) * (got.tau0_ps_per_km - target.tau0_ps_per_km),
            std::sqrt(w.d) * (got.d_ps_per_km_nm - target.d_ps_per_km_nm),
            std::sqrt(w.s) * (got.s_ps_per_km_nm2 - target.s_ps_per_km_nm2)};
}

inline double fit_objective(const CoreDispersion& got, const CoreDispersion& target, const FitWeights& w) {
    const auto r = fit_residuals(got, target, w);
    return r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
}

namespace detail {

inline TrenchProfile profile_at(const ProfileSearchBox& box, const std::vector<std::size_t>& free_dims,
                                const std::vector<double>& u) {
    auto r = box.ranges();
    std::array<double, 4> v{r[0].min, r[1].min, r[2].min, r[3].min};
    for (std::size_t k = 0; k < free_dims.size(); ++k) {
        const auto d = free_dims[k];
        v[d] = std::clamp(r[d].min + std::clamp(u[k], 0.0, 1.0) * r[d].span(), r[d].min, r[d].max);
    }
    return {v[0], v[1], v[2], v[3], box.delta2_pct};
}

// Stratified samples: one per stratum in each dimension, strata permuted independently.
inline std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(dims));
    for (std::size_t d = 0; d < dims; ++d) {
        std::vector<std::size_t> perm(count);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < count; ++i)
            pts[i][d] = (static_cast<double>(perm[i]) + unit(rng)) / static_cast<double>(count);
    }
    return pts;
}

using Residuals = std::array<double, 3>;

inline double squared_norm(const Residuals& r) { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2]; }

// Solves the 3x3 SPD system a x = b by Cholesky; returns false if not positive definite.
inline bool solve_spd3(std::array<std::array<double, 3>, 3> a, Residuals b, Residuals& x) {
    for (int j = 0; j < 3; ++j) {
        double d = a[j][j];
        for (int k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (!(d > 0.0)) return false;
        a[j][j] = std::sqrt(d);
        for (int i = j + 1; i < 3; ++i) {
            double v = a[i][j];
            for (int k = 0; k < j; ++k) v -= a[i][k] * a[j][k];
            a[i][j] = v / a[j][j];
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < i; ++k) b[i] -= a[i][k] * b[k];
        b[i] /= a[i][i];
    }
    for (int i = 2; i >= 0; --i) {
        for (int k = i + 1; k < 3; ++k) b[i] -= a[k][i] * b[k];
        b[i] /= a[i][i];
    }
    x = b;
    return true;
}

struct PolishResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

// Levenberg-Marquardt on the weighted residuals with forward-difference Jacobians
// (no analytic derivatives). Minimum-norm steps suit the 3-residual, n-parameter case.
template <class ResidualFn>
PolishResult levenberg_marquardt_polish(ResidualFn&& residual, std::vector<double> x, Residuals r0, int budget) {
    const std::size_t n = x.size();
    PolishResult res;
    res.x = x;
    res.value = squared_norm(r0);
    double mu = 1e-6;
    const double h = 1e-4;
    while (res.evaluations + static_cast<int>(n) + 1 <= budget && res.value > 0.0) {
        ++res.iterations;
        std::vector<Residuals> jac(n);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            auto xp = res.x;
            const double step = xp[j] + h <= 1.0 ? h : -h;
            xp[j] += step;
            Residuals rp{};
            ++res.evaluations;
            if (!residual(xp, rp)) {
                ok = false;
                break;
            }
            for (int i = 0; i < 3; ++i) jac[j][i] = (rp[i] - r0[i]) / step;
        }
        if (!ok) break;

        std::array<std::array<double, 3>, 3> jjt{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (std::size_t j = 0; j < n; ++j) jjt[a][b] += jac[j][a] * jac[j][b];
        const double scale = jjt[0][0] + jjt[1][1] + jjt[2][2];

        // Minimum-norm damped step v = -J^T (J J^T + mu s I)^{-1} r.
        auto damped_step = [&](const Residuals& rhs, std::vector<double>& out) {
            auto m = jjt;
            for (int a = 0; a < 3; ++a) m[a][a] += mu * scale;
            Residuals y{};
            if (!solve_spd3(m, rhs, y)) return false;
            out.assign(n, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                for (int a = 0; a < 3; ++a) out[j] -= jac[j][a] * y[a];
            return true;
        };
        auto try_point = [&](const std::vector<double>& step, Residuals& rt, std::vector<double>& xt) {
            xt = res.x;
            for (std::size_t j = 0; j < n; ++j) xt[j] = std::clamp(xt[j] + step[j], 0.0, 1.0);
            ++res.evaluations;
            return residual(xt, rt);
        };

        bool accepted = false;
        while (res.evaluations < budget && mu < 1e12) {
            std::vector<double> v;
            if (!damped_step(r0, v)) {
                mu *= 10.0;
                continue;
            }
            Residuals rv{};
            std::vector<double> xv;
            const bool ok_v = try_point(v, rv, xv);
            double best_val = ok_v ? squared_norm(rv) : std::numeric_limits<double>::infinity();
            std::vector<double> best_x = xv;
            Residuals best_r = rv;

            // Geodesic acceleration: the trial residual exposes curvature along v,
            // r_vv ~ 2 (r(x + v) - r - J v); correct the step by a/2 with a = damped solve of r_vv.
            if (ok_v && res.evaluations < budget) {
                Residuals rvv{};
                for (int i = 0; i < 3; ++i) {
                    double jv = 0.0;
                    for (std::size_t j = 0; j < n; ++j) jv += jac[j][i] * v[j];
                    rvv[i] = 2.0 * (rv[i] - r0[i] - jv);
                }
                std::vector<double> acc;
                if (damped_step(rvv, acc)) {
                    double na = 0.0, nv = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        na += acc[j] * acc[j];
                        nv += v[j] * v[j];
                    }
                    if (na <= 0.75 * 0.75 * nv) {
                        std::vector<double> w(n), xw;
                        for (std::size_t j = 0; j < n; ++j) w[j] = v[j] + 0.5 * acc[j];
                        Residuals rw{};
                        if (try_point(w, rw, xw) && squared_norm(rw) < best_val) {
                            best_val = squared_norm(rw);
                            best_x = xw;
                            best_r = rw;
                        }
                    }
                }
            }
            if (best_val < res.value) {
                const double gain = 1.0 - best_val / res.value;
                res.x = best_x;
                res.value = best_val;
                r0 = best_r;
                mu = std::max(mu * 0.3, 1e-15);
                accepted = true;
                if (gain < 1e-10) res.converged = true;
                break;
            }
            mu *= 10.0;
        }
        if (!accepted) {
            res.converged = true;
            break;
        }
        if (res.converged) break;
    }
    return res;
}

}  // namespace detail

inline CoreDispersion evaluate_profile(const TrenchProfile& p, const FitOptions& opt) {
    return dispersion_from_profile(RadialIndexProfile::from_trench(p), opt.lambda0_nm, opt.band_min_nm,
                                   opt.band_max_nm, opt.stencil_step_nm, opt.numerics);
}

/// Fits a trench profile inside `box` to `target`. Throws InfeasibleBox when more than
/// half of the seed evaluations fail in the mode solver.
inline FitResult fit_profile_to_dispersion(const CoreDispersion& target, const ProfileSearchBox& box,
                                           const FitOptions& opt = {}) {
    check(box);
    detail::require(opt.budget >= 1, ErrorCode::InvalidArgument, "fit budget must be >= 1 evaluation");
    const auto ranges = box.ranges();
    std::vector<std::size_t> free_dims;
    for (std::size_t d = 0; d < ranges.size(); ++d)
        if (ranges[d].span() > 0.0) free_dims.push_back(d);

    FitResult res;
    res.seed = opt.seed;
    const double inf = std::numeric_limits<double>::infinity();

    auto residual_at = [&](const std::vector<double>& u, detail::Residuals& r) {
        try {
            r = fit_residuals(evaluate_profile(detail::profile_at(box, free_dims, u), opt), target, opt.weights);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    auto objective_at = [&](const std::vector<double>& u) {
        detail::Residuals r{};
        return residual_at(u, r) ? detail::squared_norm(r) : inf;
    };

    if (free_dims.empty()) {
        res.profile = detail::profile_at(box, free_dims, {});
        res.achieved = evaluate_profile(res.profile, opt);
        res.objective = res.initial_objective = fit_objective(res.achieved, target, opt.weights);
        res.evaluations = 1;
        res.converged = true;
        return res;
    }

    const auto n_seeds = static_cast<std::size_t>(std::clamp(opt.seeds, 1, opt.budget));
    const auto seeds = detail::latin_hypercube(n_seeds, free_dims.size(), opt.seed);
    std::vector<double> seed_vals(n_seeds);
    parallel_for(n_seeds, opt.threads, [&](std::size_t i) { seed_vals[i] = objective_at(seeds[i]); });
    res.evaluations = static_cast<int>(n_seeds);
    const auto failures = std::count(seed_vals.begin(), seed_vals.end(), inf);
    if (2 * static_cast<std::size_t>(failures) > n_seeds)
        throw Error(ErrorCode::InfeasibleBox, "mode solver failed on " + std::to_string(failures) + " of " +
                                                  std::to_string(n_seeds) + " seed profiles");

    std::vector<std::size_t> order(n_seeds);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return seed_vals[a] < seed_vals[b]; });

    std::vector<double> best_u = seeds[order[0]];
    double best = seed_vals[order[0]];
    res.initial_objective = best;

    // Restart policy: after an improving run, restart from the incumbent with a smaller
    // simplex; after a stalled run, try the next-best seed. Two stalls in a row end the fit.
    auto simplex = opt.simplex;
    std::size_t next_seed = 1;
    std::optional<std::size_t> pending_seed;
    int stalled = 0;
    const int simplex_budget = static_cast<int>(opt.simplex_share * opt.budget);
    while (res.evaluations < simplex_budget && best > 0.0) {
        const auto start = pending_seed ? seeds[order[*pending_seed]] : best_u;
        pending_seed.reset();
        const auto r = nelder_mead_box(objective_at, start, simplex_budget - res.evaluations, simplex);
        res.evaluations += r.evaluations;
        res.iterations += r.iterations;
        const bool improved = r.value < best * (1.0 - 1e-9);
        if (r.value < best) {
            best = r.value;
            best_u = r.x;
        }
        if (improved) {
            stalled = 0;
            simplex.initial_step = std::max(simplex.initial_step * 0.5, 1e-4);
            continue;
        }
        if (++stalled >= 2) break;
        if (next_seed < n_seeds && seed_vals[order[next_seed]] < inf) {
            pending_seed = next_seed++;
            simplex.initial_step = opt.simplex.initial_step;
        }
    }

    // The simplex phase locates the valley; the polish walks along it.
    detail::Residuals r0{};
    if (best > 0.0 && res.evaluations < opt.budget && residual_at(best_u, r0)) {
        ++res.evaluations;
        const auto lm = detail::levenberg_marquardt_polish(residual_at, best_u, r0, opt.budget - res.evaluations);
        res.evaluations += lm.evaluations;
        res.iterations += lm.iterations;
        res.converged = lm.converged;
        if (lm.value < best) {
            best = lm.value;
            best_u = lm.x;
        }
    }
    if (best == 0.0) res.converged = true;

    res.profile = detail::profile_at(box, free_dims, best_u);
    res.achieved = evaluate_profile(res.profile, opt);
    res.objective = fit_objective(res.achieved, target, opt.weights);
    return res;
}

}  // namespace mcf
