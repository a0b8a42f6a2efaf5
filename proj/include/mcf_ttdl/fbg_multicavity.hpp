#pragma once

// Selectively inscribed FBG arrays in a homogeneous multicore fiber.
//
// Every grating is an ideal wavelength-selective mirror at its longitudinal
// position; a tap's delay is the facet-referenced round trip 2 n_g z / c.
// Field amplitude of grating k is sqrt(R_k) times the double-pass power
// transmission (1 - R_j) of every nearer grating j in the same core.

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/format.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/report.hpp"
#include "mcf_ttdl/tap_set.hpp"
#include "mcf_ttdl/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mcf {

inline constexpr double kDefaultGroupIndex = 1.4682;
inline constexpr double kDefaultGuardBandNm = 1.0;
inline constexpr double kDefaultMatchingToleranceNm = 0.25;

struct FBG {
    int core_id = 1;
    double bragg_wavelength_nm = 1550.0;
    double position_mm = 0.0;
    double reflectivity = 0.1;
    double grating_length_mm = 1.0;
};

struct MulticavityDevice {
    MCFGeometry geometry;
    std::vector<FBG> gratings;
    double group_index = kDefaultGroupIndex;
    double guard_band_nm = kDefaultGuardBandNm;
};

struct InscriptionConstraints {
    double beam_width_max_um = 23.0;
    double beam_height_min_um = 30.0;
    double beam_height_max_um = 50.0;
    double phase_mask_period_nm = 1070.0;
};

/// Beam settings actually planned for the inscription run.
struct BeamSettings {
    double width_um = 23.0;
    double height_um = 40.0;
};

inline void check(const FBG& g) {
    detail::require_finite(g.bragg_wavelength_nm, "bragg_wavelength_nm");
    detail::require_finite(g.position_mm, "position_mm");
    detail::require_finite(g.reflectivity, "reflectivity");
    detail::require_finite(g.grating_length_mm, "grating_length_mm");
    detail::require(g.reflectivity >= 0.0 && g.reflectivity < 1.0, ErrorCode::InvalidArgument,
                    "reflectivity must lie in [0, 1)");
    detail::require(g.position_mm >= 0.0, ErrorCode::InvalidArgument, "grating position must be >= 0");
    detail::require(g.grating_length_mm > 0.0, ErrorCode::InvalidArgument, "grating length must be > 0");
}

inline void check(const InscriptionConstraints& c) {
    detail::require(c.beam_width_max_um > 0.0, ErrorCode::InvalidArgument, "beam_width_max must be > 0");
    detail::require(0.0 < c.beam_height_min_um && c.beam_height_min_um < c.beam_height_max_um,
                    ErrorCode::InvalidArgument, "beam height range must satisfy 0 < min < max");
    detail::require(c.phase_mask_period_nm > 0.0, ErrorCode::InvalidArgument, "phase mask period must be > 0");
}

/// Peak power reflectivity of a uniform grating, tanh^2(kappa * L).
inline double uniform_fbg_reflectivity(double kappa_per_mm, double grating_length_mm) {
    detail::require_finite(kappa_per_mm, "kappa");
    detail::require_finite(grating_length_mm, "grating_length_mm");
    detail::require(kappa_per_mm >= 0.0, ErrorCode::InvalidArgument, "coupling coefficient must be >= 0");
    detail::require(grating_length_mm > 0.0, ErrorCode::InvalidArgument, "grating length must be > 0");
    const double t = std::tanh(kappa_per_mm * grating_length_mm);
    return t * t;
}

namespace detail {

inline std::vector<FBG> core_gratings(const MulticavityDevice& dev, int core_id) {
    std::vector<FBG> out;
    for (const auto& g : dev.gratings)
        if (g.core_id == core_id) out.push_back(g);
    std::stable_sort(out.begin(), out.end(), [](const FBG& a, const FBG& b) { return a.position_mm < b.position_mm; });
    return out;
}

// Field amplitude of grating `g` after double-pass transmission through nearer gratings of its core.
inline double shadowed_amplitude(const MulticavityDevice& dev, const FBG& g) {
    double a = std::sqrt(g.reflectivity);
    for (const auto& other : dev.gratings)
        if (other.core_id == g.core_id && other.position_mm < g.position_mm) a *= 1.0 - other.reflectivity;
    return a;
}

inline void check_device(const MulticavityDevice& dev) {
    detail::require(dev.group_index > 0.0, ErrorCode::InvalidArgument, "group index must be > 0");
    for (const auto& g : dev.gratings) {
        check(g);
        detail::require(g.core_id >= 1 && g.core_id <= dev.geometry.core_count, ErrorCode::InvalidArgument,
                        "grating core_id " + std::to_string(g.core_id) + " outside 1.." +
                            std::to_string(dev.geometry.core_count));
    }
}

inline std::string grating_label(const FBG& g) {
    return "core " + std::to_string(g.core_id) + " @" + format_double(g.bragg_wavelength_nm) + " nm";
}

}  // namespace detail

/// Wavelength-diversity taps: every grating of one core, ordered by position.
inline TapSet tap_set_wavelength_diversity(const MulticavityDevice& dev, int core_id) {
    detail::check_device(dev);
    detail::require(core_id >= 1 && core_id <= dev.geometry.core_count, ErrorCode::InvalidArgument,
                    "unknown core_id " + std::to_string(core_id));
    const auto gs = detail::core_gratings(dev, core_id);
    detail::require(!gs.empty(), ErrorCode::NoMatch, "core " + std::to_string(core_id) + " has no gratings");
    std::vector<Tap> taps;
    for (const auto& g : gs)
        taps.push_back({round_trip_delay_ps(g.position_mm, dev.group_index), detail::shadowed_amplitude(dev, g),
                        detail::grating_label(g)});
    return TapSet(std::move(taps), "wavelength diversity, core " + std::to_string(core_id));
}

/// Spatial-diversity taps: gratings in any core whose Bragg wavelength lies within
/// `matching_tolerance_nm` of `bragg_wavelength_nm`.
inline TapSet tap_set_spatial_diversity(const MulticavityDevice& dev, double bragg_wavelength_nm,
                                        double matching_tolerance_nm = kDefaultMatchingToleranceNm) {
    detail::check_device(dev);
    detail::require_finite(bragg_wavelength_nm, "bragg_wavelength_nm");
    detail::require(matching_tolerance_nm >= 0.0, ErrorCode::InvalidArgument, "matching tolerance must be >= 0");
    std::vector<Tap> taps;
    for (const auto& g : dev.gratings)
        if (std::abs(g.bragg_wavelength_nm - bragg_wavelength_nm) <= matching_tolerance_nm)
            taps.push_back({round_trip_delay_ps(g.position_mm, dev.group_index), detail::shadowed_amplitude(dev, g),
                            detail::grating_label(g)});
    if (taps.empty())
        throw Error(ErrorCode::NoMatch, "no grating within " + format_double(matching_tolerance_nm) + " nm of " +
                                            format_double(bragg_wavelength_nm) + " nm");
    return TapSet(std::move(taps), "spatial diversity @" + format_double(bragg_wavelength_nm) + " nm");
}

/// Bragg wavelengths used by the reference three-core device.
inline constexpr double kLambda1Nm = 1537.07;
inline constexpr double kLambda2Nm = 1541.51;
inline constexpr double kLambda3Nm = 1546.26;

/// Reference device: three outer cores (#6, #5, #4) of a 7-core 125/35 um fiber, each
/// with three uniform gratings. In-core spacings are 20, 21, 22 mm; same-wavelength
/// gratings in adjacent cores are displaced by 6, 7, 8 mm at lambda1..lambda3.
inline MulticavityDevice build_paper_device(double group_index = kDefaultGroupIndex, double reflectivity = 0.1,
                                            double grating_length_mm = 1.0) {
    MulticavityDevice dev;
    dev.geometry = MCFGeometry::seven_core();
    dev.group_index = group_index;

    struct CoreArray {
        int core_id;
        double first_mm;
        double spacing_mm;
    };
    // Offsets 0/6/12 mm with spacing stepping by 1 mm give 6/7/8 mm displacements per wavelength.
    const CoreArray arrays[] = {{6, 0.0, 20.0}, {5, 6.0, 21.0}, {4, 12.0, 22.0}};
    const double lambdas[] = {kLambda1Nm, kLambda2Nm, kLambda3Nm};
    for (const auto& a : arrays)
        for (int i = 0; i < 3; ++i)
            dev.gratings.push_back({a.core_id, lambdas[i], a.first_mm + i * a.spacing_mm, reflectivity,
                                    grating_length_mm});
    return dev;
}

/// Geometric feasibility of a selective inscription plan. Rules:
///   beam-width (single-core addressability), beam-height, grating-overlap, guard-band.
inline ValidationReport validate_inscription_plan(const MulticavityDevice& dev, const InscriptionConstraints& c = {},
                                                  const BeamSettings& beam = {}) {
    check(c);
    ValidationReport rep;
    auto fail = [&](std::string rule, std::string detail, double margin) {
        rep.violations.push_back({std::move(rule), std::move(detail), margin});
    };

    const double width_margin = c.beam_width_max_um - beam.width_um;
    rep.metrics.emplace_back("beam_width_margin_um", width_margin);
    if (width_margin < 0.0)
        fail("beam-width",
             "beam width " + format_double(beam.width_um) + " um exceeds single-core addressability limit " +
                 format_double(c.beam_width_max_um) + " um",
             width_margin);

    const double height_margin =
        std::min(beam.height_um - c.beam_height_min_um, c.beam_height_max_um - beam.height_um);
    rep.metrics.emplace_back("beam_height_margin_um", height_margin);
    if (height_margin < 0.0)
        fail("beam-height",
             "beam height " + format_double(beam.height_um) + " um outside [" + format_double(c.beam_height_min_um) +
                 ", " + format_double(c.beam_height_max_um) + "] um",
             height_margin);

    for (const auto& g : dev.gratings) {
        try {
            check(g);
        } catch (const Error& e) {
            fail("grating", "core " + std::to_string(g.core_id) + ": " + e.what(), 0.0);
        }
    }

    for (int core = 1; core <= dev.geometry.core_count; ++core) {
        const auto gs = detail::core_gratings(dev, core);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = i + 1; j < gs.size(); ++j) {
                const double sep = std::abs(gs[j].position_mm - gs[i].position_mm);
                const double need = 0.5 * (gs[i].grating_length_mm + gs[j].grating_length_mm);
                if (sep < need)
                    fail("grating-overlap",
                         "core " + std::to_string(core) + ": gratings at " + format_double(gs[i].position_mm) +
                             " and " + format_double(gs[j].position_mm) + " mm overlap",
                         sep - need);
                const double dl = std::abs(gs[j].bragg_wavelength_nm - gs[i].bragg_wavelength_nm);
                if (dl < dev.guard_band_nm)
                    fail("guard-band",
                         "core " + std::to_string(core) + ": Bragg wavelengths " +
                             format_double(gs[i].bragg_wavelength_nm) + " and " +
                             format_double(gs[j].bragg_wavelength_nm) + " nm closer than guard band",
                         dl - dev.guard_band_nm);
            }
        }
    }
    for (const auto& g : dev.gratings)
        if (g.core_id < 1 || g.core_id > dev.geometry.core_count)
            fail("core-id", "grating core_id " + std::to_string(g.core_id) + " not in fiber", 0.0);
    return rep;
}

}  // namespace mcf
