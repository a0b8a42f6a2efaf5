#pragma once

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/report.hpp"
#include "mcf_ttdl/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace mcf {

enum class Layout { single, hex_1ring };

inline std::string_view to_string(Layout l) { return l == Layout::single ? "single" : "hex_1ring"; }

inline Layout parse_layout(std::string_view s) {
    if (s == "single") return Layout::single;
    if (s == "hex_1ring") return Layout::hex_1ring;
    throw Error(ErrorCode::UnsupportedLayout, "unknown layout '" + std::string(s) + "'");
}

/// Default nominal core radius used for clearance checks when no index profile is attached.
inline constexpr double kDefaultCoreRadiusUm = 4.1;

struct MCFGeometry {
    int core_count = 7;
    double cladding_diameter_um = 125.0;
    double core_pitch_um = 35.0;
    Layout layout = Layout::hex_1ring;
    double core_radius_nominal_um = kDefaultCoreRadiusUm;

    static MCFGeometry seven_core() { return {}; }
    static MCFGeometry single_core() { return {1, 125.0, 35.0, Layout::single, kDefaultCoreRadiusUm}; }
};

struct Point2 {
    double x_um = 0.0;
    double y_um = 0.0;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x_um - b.x_um, a.y_um - b.y_um); }

/// Transverse core centers. Index 0 is core #1 (the center core for hex_1ring);
/// outer cores follow counterclockwise from the +x axis.
inline std::vector<Point2> core_positions(const MCFGeometry& g) {
    if (g.layout == Layout::single) {
        if (g.core_count != 1)
            throw Error(ErrorCode::UnsupportedLayout, "single layout requires core_count = 1");
        return {Point2{}};
    }
    if (g.core_count != 7)
        throw Error(ErrorCode::UnsupportedLayout, "hex_1ring layout requires core_count = 7");
    std::vector<Point2> pts;
    pts.reserve(7);
    pts.push_back({});
    for (int k = 0; k < 6; ++k) {
        const double ang = k * kPi / 3.0;
        pts.push_back({g.core_pitch_um * std::cos(ang), g.core_pitch_um * std::sin(ang)});
    }
    return pts;
}

/// Checks every MCFGeometry invariant. Violations are report entries, never exceptions.
/// Reports `outer_edge_margin_um` (cladding radius minus outermost core edge) when computable.
inline ValidationReport validate_geometry(const MCFGeometry& g) {
    ValidationReport rep;
    auto fail = [&](std::string rule, std::string detail, double margin) {
        rep.violations.push_back({std::move(rule), std::move(detail), margin});
    };

    if (g.core_count < 1) fail("core-count", "core_count must be >= 1", g.core_count - 1.0);
    if (!(g.cladding_diameter_um > 0.0))
        fail("cladding-positive", "cladding_diameter_um must be > 0", g.cladding_diameter_um);
    if (!(g.core_radius_nominal_um > 0.0))
        fail("core-radius-positive", "core_radius_nominal_um must be > 0", g.core_radius_nominal_um);
    if (g.core_count > 1 && !(g.core_pitch_um > 0.0))
        fail("pitch-positive", "core_pitch_um must be > 0", g.core_pitch_um);

    std::vector<Point2> pts;
    try {
        pts = core_positions(g);
    } catch (const Error& e) {
        fail("layout", e.what(), 0.0);
        return rep;
    }

    double max_center = 0.0;
    for (const auto& p : pts) max_center = std::max(max_center, std::hypot(p.x_um, p.y_um));
    const double margin = g.cladding_diameter_um / 2.0 - (max_center + g.core_radius_nominal_um);
    rep.metrics.emplace_back("outer_edge_margin_um", margin);
    if (!(margin > 0.0))
        fail("core-inside-cladding",
             "outermost core edge " + std::to_string(max_center + g.core_radius_nominal_um) +
                 " um must be strictly inside cladding radius " + std::to_string(g.cladding_diameter_um / 2.0) +
                 " um",
             margin);

    if (pts.size() > 1 && g.core_pitch_um > 0.0) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) min_dist = std::min(min_dist, distance(pts[i], pts[j]));
        rep.metrics.emplace_back("min_core_distance_um", min_dist);
        if (min_dist < g.core_pitch_um * (1.0 - 1e-9))
            fail("pitch-spacing", "pairwise core distance below pitch", min_dist - g.core_pitch_um);
    }
    return rep;
}

/// Trench-assisted step profile. Radii in um, deltas in percent.
/// Layers: core [0, a1], inner cladding (a1, a1+a2], trench (a1+a2, a1+a2+w], cladding beyond.
struct TrenchProfile {
    double a1_um = 4.1;
    double delta1_pct = 0.36;
    double a2_um = 4.0;
    double w_um = 4.0;
    double delta2_pct = 1.0;

    double trench_inner_um() const { return a1_um + a2_um; }
    double trench_outer_um() const { return a1_um + a2_um + w_um; }
};

inline void check(const TrenchProfile& p) {
    for (double v : {p.a1_um, p.delta1_pct, p.a2_um, p.w_um, p.delta2_pct}) detail::require_finite(v, "trench profile");
    detail::require(p.a1_um > 0 && p.a2_um > 0 && p.w_um > 0, ErrorCode::InvalidArgument,
                    "trench profile lengths must be > 0");
    detail::require(p.delta1_pct > 0 && p.delta2_pct > 0, ErrorCode::InvalidArgument,
                    "trench profile deltas must be > 0");
}

/// Third-order group-delay model of one core around the anchor wavelength.
/// `relative` marks tau0 as a relative offset rather than a physical delay.
struct CoreDispersion {
    double tau0_ps_per_km = 0.0;
    double d_ps_per_km_nm = 0.0;
    double s_ps_per_km_nm2 = 0.0;
    bool relative = true;
};

inline void check(const CoreDispersion& c) {
    detail::require_finite(c.tau0_ps_per_km, "tau0");
    detail::require_finite(c.d_ps_per_km_nm, "D");
    detail::require_finite(c.s_ps_per_km_nm2, "S");
    detail::require(c.relative || c.tau0_ps_per_km > 0.0, ErrorCode::InvalidArgument,
                    "physical tau0 must be > 0 (set relative for an offset convention)");
}

struct HeteroMCFSpec {
    MCFGeometry geometry;
    double lambda0_nm = 1550.0;
    std::vector<CoreDispersion> cores;
    double length_km = 1.0;
};

/// Structural invariants only; the dispersion conditions live in validate_hetero_spec.
inline void check(const HeteroMCFSpec& s) {
    detail::require_finite(s.lambda0_nm, "lambda0_nm");
    detail::require_finite(s.length_km, "length_km");
    detail::require(s.length_km > 0.0, ErrorCode::InvalidArgument, "length_km must be > 0");
    detail::require(s.lambda0_nm > 0.0, ErrorCode::InvalidArgument, "lambda0_nm must be > 0");
    detail::require(static_cast<int>(s.cores.size()) == s.geometry.core_count, ErrorCode::InvalidArgument,
                    "cores list length (" + std::to_string(s.cores.size()) + ") must equal core_count (" +
                        std::to_string(s.geometry.core_count) + ")");
    for (const auto& c : s.cores) check(c);
}

}  // namespace mcf
