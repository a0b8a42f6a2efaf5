#pragma once

// Group-delay algebra for heterogeneous (dispersion-engineered) multicore links.
//
// Each core follows a quadratic group-delay model around the anchor wavelength:
//   tau_n(lambda) = L * [tau0_n + D_n (lambda - lambda0) + S_n/2 (lambda - lambda0)^2]
// The link is a usable sampled delay line when tau0 is shared, D_n steps by a
// constant increment, and the quadratic term stays small across the band.

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/format.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/tap_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mcf {

/// Group delay in ps of one core over a link of `length_km`.
inline double group_delay(const CoreDispersion& core, double lambda_nm, double lambda0_nm, double length_km) {
    detail::require_finite(lambda_nm, "lambda_nm");
    detail::require_finite(lambda0_nm, "lambda0_nm");
    detail::require_finite(length_km, "length_km");
    check(core);
    detail::require(length_km > 0.0, ErrorCode::InvalidArgument, "length_km must be > 0");
    const double x = lambda_nm - lambda0_nm;
    return length_km * (core.tau0_ps_per_km + core.d_ps_per_km_nm * x + 0.5 * core.s_ps_per_km_nm2 * x * x);
}

/// Adjacent-core differential delays (ps) at `lambda_m_nm`, from the closed form
///   L * [dD (lm - l0) + dS/2 (lm - l0)^2 + dtau0].
/// Entry n is core n+1 minus core n.
inline std::vector<double> differential_delay_spatial(const HeteroMCFSpec& spec, double lambda_m_nm) {
    check(spec);
    detail::require_finite(lambda_m_nm, "lambda_m_nm");
    detail::require(spec.cores.size() >= 2, ErrorCode::InvalidArgument,
                    "spatial differential delay needs at least 2 cores");
    const double x = lambda_m_nm - spec.lambda0_nm;
    std::vector<double> out;
    out.reserve(spec.cores.size() - 1);
    for (std::size_t n = 0; n + 1 < spec.cores.size(); ++n) {
        const auto& a = spec.cores[n];
        const auto& b = spec.cores[n + 1];
        const double dtau0 = b.tau0_ps_per_km - a.tau0_ps_per_km;
        const double dd = b.d_ps_per_km_nm - a.d_ps_per_km_nm;
        const double ds = b.s_ps_per_km_nm2 - a.s_ps_per_km_nm2;
        out.push_back(spec.length_km * (dtau0 + dd * x + 0.5 * ds * x * x));
    }
    return out;
}

/// Delay difference in one core between lambda_ref + delta and lambda_ref.
inline double differential_delay_wavelength(const CoreDispersion& core, double delta_lambda_nm, double lambda_ref_nm,
                                            double lambda0_nm, double length_km) {
    detail::require_finite(delta_lambda_nm, "delta_lambda_nm");
    detail::require_finite(lambda_ref_nm, "lambda_ref_nm");
    detail::require(delta_lambda_nm != 0.0, ErrorCode::InvalidArgument, "wavelength step must be non-zero");
    check(core);
    detail::require(length_km > 0.0, ErrorCode::InvalidArgument, "length_km must be > 0");
    const double x1 = lambda_ref_nm + delta_lambda_nm - lambda0_nm;
    const double x0 = lambda_ref_nm - lambda0_nm;
    return length_km * (core.d_ps_per_km_nm * delta_lambda_nm + 0.5 * core.s_ps_per_km_nm2 * (x1 * x1 - x0 * x0));
}

struct HeteroTolerances {
    double anchor_delay_spread_ps = 0.1;      // over the whole link
    double delta_d_rel_deviation = 0.01;      // fraction of the mean increment
    double slope_variation = 0.01;            // ps/(km nm^2)
    double quadratic_fraction = 0.05;
};

struct HeteroValidationReport {
    double anchor_delay_spread_ps = 0.0;
    std::vector<double> delta_d_values;
    double delta_d_max_deviation = 0.0;
    double slope_variation_max = 0.0;
    double quadratic_fraction_max = 0.0;
    bool d_ordering_ok = true;  // D non-decreasing in core index
    bool anchor_ok = true;
    bool delta_d_ok = true;
    bool slope_ok = true;
    bool quadratic_ok = true;
    bool pass = true;
};

/// Checks the operability conditions of a heterogeneous link over [band_min, band_max].
/// A single-core link passes trivially (no pairs to compare).
inline HeteroValidationReport validate_hetero_spec(const HeteroMCFSpec& spec, double band_min_nm, double band_max_nm,
                                                   const HeteroTolerances& tol = {}) {
    check(spec);
    detail::require_finite(band_min_nm, "band_min_nm");
    detail::require_finite(band_max_nm, "band_max_nm");
    detail::require(band_max_nm >= band_min_nm, ErrorCode::InvalidArgument, "empty band (max < min)");

    HeteroValidationReport rep;
    const auto& cores = spec.cores;

    auto [tmin, tmax] = std::minmax_element(cores.begin(), cores.end(), [](const auto& a, const auto& b) {
        return a.tau0_ps_per_km < b.tau0_ps_per_km;
    });
    rep.anchor_delay_spread_ps = (tmax->tau0_ps_per_km - tmin->tau0_ps_per_km) * spec.length_km;

    double mean_dd = 0.0;
    for (std::size_t n = 0; n + 1 < cores.size(); ++n) {
        const double dd = cores[n + 1].d_ps_per_km_nm - cores[n].d_ps_per_km_nm;
        rep.delta_d_values.push_back(dd);
        mean_dd += dd;
        rep.slope_variation_max =
            std::max(rep.slope_variation_max, std::abs(cores[n + 1].s_ps_per_km_nm2 - cores[n].s_ps_per_km_nm2));
        if (dd < 0.0) rep.d_ordering_ok = false;
    }
    if (!rep.delta_d_values.empty()) mean_dd /= static_cast<double>(rep.delta_d_values.size());
    for (double dd : rep.delta_d_values)
        rep.delta_d_max_deviation = std::max(rep.delta_d_max_deviation, std::abs(dd - mean_dd));

    // |dS/2 x^2| / |dD x| = |dS| |x| / (2 |dD|) peaks at the band edge farthest from lambda0.
    const double x_far = std::max(std::abs(band_min_nm - spec.lambda0_nm), std::abs(band_max_nm - spec.lambda0_nm));
    for (std::size_t n = 0; n + 1 < cores.size(); ++n) {
        const double dd = std::abs(rep.delta_d_values[n]);
        const double ds = std::abs(cores[n + 1].s_ps_per_km_nm2 - cores[n].s_ps_per_km_nm2);
        double frac = 0.0;
        if (x_far == 0.0 || ds == 0.0)
            frac = 0.0;
        else if (dd == 0.0)
            frac = std::numeric_limits<double>::infinity();
        else
            frac = ds * x_far / (2.0 * dd);
        rep.quadratic_fraction_max = std::max(rep.quadratic_fraction_max, frac);
    }

    rep.anchor_ok = rep.anchor_delay_spread_ps <= tol.anchor_delay_spread_ps;
    rep.delta_d_ok = rep.delta_d_max_deviation <= tol.delta_d_rel_deviation * std::abs(mean_dd);
    rep.slope_ok = rep.slope_variation_max <= tol.slope_variation;
    rep.quadratic_ok = rep.quadratic_fraction_max <= tol.quadratic_fraction;
    if (cores.size() >= 2 && mean_dd <= 0.0) rep.d_ordering_ok = false;
    rep.pass = rep.anchor_ok && rep.delta_d_ok && rep.slope_ok && rep.quadratic_ok && rep.d_ordering_ok;
    return rep;
}

/// Spatial-diversity taps: one per core at `lambda_m_nm`, delays from group_delay.
/// Throws DegenerateTaps at the anchor wavelength, where every core has the same delay.
inline TapSet tap_set_spatial(const HeteroMCFSpec& spec, double lambda_m_nm, std::span<const double> weights) {
    check(spec);
    detail::require(weights.size() == spec.cores.size(), ErrorCode::InvalidArgument,
                    "weights length must equal core count");
    if (lambda_m_nm == spec.lambda0_nm)
        throw Error(ErrorCode::DegenerateTaps,
                    "operating wavelength equals the anchor wavelength; all cores share the anchor delay");
    std::vector<Tap> taps;
    for (std::size_t n = 0; n < spec.cores.size(); ++n)
        taps.push_back({group_delay(spec.cores[n], lambda_m_nm, spec.lambda0_nm, spec.length_km), weights[n],
                        "core " + std::to_string(n + 1)});
    return TapSet(std::move(taps), "hetero spatial @" + format_double(lambda_m_nm) + " nm");
}

inline TapSet tap_set_spatial(const HeteroMCFSpec& spec, double lambda_m_nm) {
    const std::vector<double> unit(spec.cores.size(), 1.0);
    return tap_set_spatial(spec, lambda_m_nm, unit);
}

}  // namespace mcf
