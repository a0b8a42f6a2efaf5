#pragma once

// Closed-form inverse design for both delay-line technologies.

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/units.hpp"

#include <cmath>
#include <vector>

namespace mcf {

/// Grating spacing (mm) whose round trip gives `target_fsr_ghz`: d = c / (2 n_g FSR).
inline double spacing_for_fsr(double target_fsr_ghz, double group_index) {
    detail::require_finite(target_fsr_ghz, "target_fsr_ghz");
    detail::require_finite(group_index, "group_index");
    detail::require(target_fsr_ghz > 0.0, ErrorCode::InvalidArgument, "target FSR must be > 0");
    detail::require(group_index > 1.0, ErrorCode::InvalidArgument, "group index must be > 1");
    return kSpeedOfLight / (2.0 * group_index * target_fsr_ghz * 1e9) * 1e3;
}

struct WavelengthDesign {
    double lambda_m_nm = 0.0;
    double quadratic_fraction = 0.0;  // |dS| |x| / (2 |dD|) at the design point
    int newton_steps = 0;
};

/// Operating wavelength for a target FSR on a heterogeneous link.
/// First-order inverse lm = l0 + 1000 / (dD L FSR); when the slope increment makes
/// the quadratic term exceed `quadratic_tolerance`, Newton refines on the full quadratic.
inline WavelengthDesign wavelength_for_fsr_hetero(double delta_d, double length_km, double lambda0_nm,
                                                  double target_fsr_ghz, double delta_s = 0.0,
                                                  double quadratic_tolerance = 0.05) {
    for (double v : {delta_d, length_km, lambda0_nm, target_fsr_ghz, delta_s}) detail::require_finite(v, "design input");
    detail::require(delta_d != 0.0, ErrorCode::InvalidArgument,
                    "zero incremental dispersion: no spatial diversity possible");
    detail::require(length_km > 0.0, ErrorCode::InvalidArgument, "length_km must be > 0");
    detail::require(target_fsr_ghz > 0.0, ErrorCode::InvalidArgument, "target FSR must be > 0");

    const double per_km = fsr_ghz_from_delay_ps(target_fsr_ghz) / length_km;  // target delay per km, ps/km
    double x = per_km / delta_d;
    WavelengthDesign out;
    auto frac = [&](double xx) { return std::abs(delta_s) * std::abs(xx) / (2.0 * std::abs(delta_d)); };
    if (delta_s != 0.0 && frac(x) > quadratic_tolerance) {
        const double target = delta_d > 0 ? per_km : -per_km;
        detail::require(delta_d * delta_d + 2.0 * delta_s * target >= 0.0, ErrorCode::NotConverged,
                        "no operating wavelength reaches the target FSR with this slope increment");
        for (int i = 0; i < 50; ++i) {
            const double g = delta_d * x + 0.5 * delta_s * x * x - target;
            const double dg = delta_d + delta_s * x;
            detail::require(dg != 0.0, ErrorCode::NotConverged, "stationary point in wavelength design");
            const double step = g / dg;
            x -= step;
            ++out.newton_steps;
            if (std::abs(step) <= 1e-15 * std::abs(x)) break;
        }
        const double g = delta_d * x + 0.5 * delta_s * x * x - target;
        detail::require(std::abs(g) <= 1e-10 * std::abs(target), ErrorCode::NotConverged,
                        "wavelength design did not converge");
    }
    out.lambda_m_nm = lambda0_nm + x;
    out.quadratic_fraction = frac(x);
    return out;
}

/// Linearly increasing dispersion across cores: D_n = D1 + (n - 1) dD, shared tau0 and S.
inline std::vector<CoreDispersion> assign_core_dispersions(int core_count, double d1, double delta_d,
                                                           double tau0_ps_per_km = 0.0, double slope = 0.0,
                                                           bool relative = true) {
    detail::require(core_count >= 1, ErrorCode::InvalidArgument, "core_count must be >= 1");
    std::vector<CoreDispersion> out;
    for (int n = 0; n < core_count; ++n) out.push_back({tau0_ps_per_km, d1 + n * delta_d, slope, relative});
    return out;
}

}  // namespace mcf
