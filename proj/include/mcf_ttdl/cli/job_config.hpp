#pragma once

// Typed job descriptions built from a validated configuration document.

#include "mcf_ttdl/cli/config.hpp"
#include "mcf_ttdl/design.hpp"
#include "mcf_ttdl/fbg_multicavity.hpp"
#include "mcf_ttdl/hetero_delay.hpp"
#include "mcf_ttdl/mode_solver.hpp"
#include "mcf_ttdl/profile_fit.hpp"
#include "mcf_ttdl/tap_set.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mcf::cli {

enum class JobKind {
    simulate_filter,
    taps_fbg,
    taps_hetero,
    validate_hetero,
    validate_inscription,
    design_spacing,
    design_wavelength,
    design_profile,
    solve_dispersion,
};

inline constexpr std::array<std::pair<JobKind, std::string_view>, 9> kJobKinds{{
    {JobKind::simulate_filter, "simulate-filter"},
    {JobKind::taps_fbg, "taps-fbg"},
    {JobKind::taps_hetero, "taps-hetero"},
    {JobKind::validate_hetero, "validate-hetero"},
    {JobKind::validate_inscription, "validate-inscription"},
    {JobKind::design_spacing, "design-spacing"},
    {JobKind::design_wavelength, "design-wavelength"},
    {JobKind::design_profile, "design-profile"},
    {JobKind::solve_dispersion, "solve-dispersion"},
}};

inline std::string_view to_string(JobKind k) {
    for (const auto& [kind, name] : kJobKinds)
        if (kind == k) return name;
    return "unknown";
}

inline std::optional<JobKind> parse_job_kind(std::string_view s) {
    for (const auto& [kind, name] : kJobKinds)
        if (name == s) return kind;
    return std::nullopt;
}

struct FilterGrid {
    double f_start_ghz = 0.0;
    double f_stop_ghz = 0.0;
    std::size_t points = 4001;
};

struct HeteroSource {
    HeteroMCFSpec spec;
    double lambda_m_nm = 0.0;
    std::vector<double> weights;
};

struct FbgSource {
    MulticavityDevice device;
    bool spatial = false;
    int core_id = 0;
    double bragg_nm = 0.0;
    double tolerance_nm = kDefaultMatchingToleranceNm;
};

using TapSource = std::variant<TapSet, HeteroSource, FbgSource>;

struct SimulateFilterJob {
    TapSource source;
    FilterGrid grid;
};
struct TapsFbgJob {
    FbgSource source;
};
struct TapsHeteroJob {
    HeteroSource source;
};
struct ValidateHeteroJob {
    HeteroMCFSpec spec;
    double band_min_nm = 0.0;
    double band_max_nm = 0.0;
    HeteroTolerances tolerances;
};
struct ValidateInscriptionJob {
    MulticavityDevice device;
    InscriptionConstraints constraints;
    BeamSettings beam;
};
struct DesignSpacingJob {
    double fsr_ghz = 0.0;
    double group_index = kDefaultGroupIndex;
};
struct DesignWavelengthJob {
    double fsr_ghz = 0.0;
    double delta_d = 0.0;
    double delta_s = 0.0;
    double length_km = 0.0;
    double lambda0_nm = 0.0;
    double quadratic_tolerance = 0.05;
};
struct DesignProfileJob {
    CoreDispersion target;
    ProfileSearchBox box;
    FitOptions options;
};
struct SolveDispersionJob {
    std::optional<TrenchProfile> trench;  // empty: step-index core
    double a1_um = 0.0;
    double delta1_pct = 0.0;
    double lambda0_nm = 1550.0;
    double band_min_nm = 1500.0;
    double band_max_nm = 1600.0;
    double stencil_step_nm = kDefaultStencilStepNm;
    SolverNumerics numerics;
};

using JobPayload = std::variant<SimulateFilterJob, TapsFbgJob, TapsHeteroJob, ValidateHeteroJob,
                                ValidateInscriptionJob, DesignSpacingJob, DesignWavelengthJob, DesignProfileJob,
                                SolveDispersionJob>;

struct JobConfig {
    JobKind kind = JobKind::simulate_filter;
    std::string name;  // output file stem, defaults to the kind
    JobPayload job;
};

namespace schema {

using VT = ValueType;

inline SectionSpec job() { return {"job", true, {{"kind", VT::text, true}, {"name", VT::text}}}; }

inline SectionSpec geometry() {
    return {"geometry",
            false,
            {{"core_count", VT::integer},
             {"cladding_diameter_um", VT::number},
             {"pitch_um", VT::number},
             {"layout", VT::text},
             {"core_radius_um", VT::number}}};
}

inline SectionSpec hetero() {
    return {"hetero",
            true,
            {{"lambda0_nm", VT::number, true},
             {"length_km", VT::number, true},
             {"d_ps_km_nm", VT::number_list},
             {"d1_ps_km_nm", VT::number},
             {"delta_d_ps_km_nm", VT::number},
             {"tau0_ps_km", VT::number_list},
             {"s_ps_km_nm2", VT::number_list},
             {"relative", VT::boolean}}};
}

inline SectionSpec operating() {
    return {"operating", true, {{"lambda_m_nm", VT::number, true}, {"weights", VT::number_list}}};
}

inline SectionSpec device() {
    return {"device",
            true,
            {{"preset", VT::text},
             {"group_index", VT::number},
             {"guard_band_nm", VT::number},
             {"grating_core", VT::integer_list},
             {"grating_bragg_nm", VT::number_list},
             {"grating_position_mm", VT::number_list},
             {"grating_reflectivity", VT::number_list},
             {"grating_length_mm", VT::number_list}}};
}

inline SectionSpec select() {
    return {"select",
            true,
            {{"regime", VT::text, true}, {"core_id", VT::integer}, {"bragg_nm", VT::number}, {"tolerance_nm", VT::number}}};
}

inline SectionSpec taps() { return {"taps", true, {{"delay_ps", VT::number_list, true}, {"amplitude", VT::number_list}}}; }

inline SectionSpec grid() {
    return {"grid", true, {{"f_start_ghz", VT::number}, {"f_stop_ghz", VT::number, true}, {"points", VT::integer}}};
}

inline SectionSpec band() { return {"band", true, {{"min_nm", VT::number, true}, {"max_nm", VT::number, true}}}; }

inline SectionSpec tolerances() {
    return {"tolerances",
            false,
            {{"anchor_spread_ps", VT::number},
             {"delta_d_rel", VT::number},
             {"slope_variation_ps_km_nm2", VT::number},
             {"quadratic_fraction", VT::number}}};
}

inline SectionSpec beam() { return {"beam", true, {{"width_um", VT::number, true}, {"height_um", VT::number, true}}}; }

inline SectionSpec constraints() {
    return {"constraints",
            false,
            {{"beam_width_max_um", VT::number},
             {"beam_height_min_um", VT::number},
             {"beam_height_max_um", VT::number},
             {"phase_mask_period_nm", VT::number}}};
}

inline SectionSpec numerics() {
    return {"numerics",
            false,
            {{"step_um", VT::number}, {"growth", VT::number}, {"domain_factor", VT::number}, {"refinement", VT::integer}}};
}

inline SectionSpec optional(SectionSpec s) {
    s.required = false;
    return s;
}

inline std::vector<SectionSpec> for_kind(JobKind k) {
    switch (k) {
        case JobKind::simulate_filter:
            return {job(),        optional(taps()),   geometry(), optional(hetero()), optional(operating()),
                    optional(device()), optional(select()), grid()};
        case JobKind::taps_fbg: return {job(), device(), select()};
        case JobKind::taps_hetero: return {job(), geometry(), hetero(), operating()};
        case JobKind::validate_hetero: return {job(), geometry(), hetero(), band(), tolerances()};
        case JobKind::validate_inscription: return {job(), device(), beam(), constraints()};
        case JobKind::design_spacing:
            return {job(), {"target", true, {{"fsr_ghz", VT::number, true}, {"group_index", VT::number}}}};
        case JobKind::design_wavelength:
            return {job(),
                    {"target", true, {{"fsr_ghz", VT::number, true}}},
                    {"link",
                     true,
                     {{"delta_d_ps_km_nm", VT::number, true},
                      {"length_km", VT::number, true},
                      {"lambda0_nm", VT::number, true},
                      {"delta_s_ps_km_nm2", VT::number},
                      {"quadratic_fraction", VT::number}}}};
        case JobKind::design_profile:
            return {job(),
                    {"target",
                     true,
                     {{"tau0_ps_km", VT::number, true},
                      {"d_ps_km_nm", VT::number, true},
                      {"s_ps_km_nm2", VT::number, true}}},
                    {"box",
                     false,
                     {{"a1_min_um", VT::number},
                      {"a1_max_um", VT::number},
                      {"delta1_min_pct", VT::number},
                      {"delta1_max_pct", VT::number},
                      {"a2_min_um", VT::number},
                      {"a2_max_um", VT::number},
                      {"w_min_um", VT::number},
                      {"w_max_um", VT::number},
                      {"delta2_pct", VT::number}}},
                    {"fit",
                     false,
                     {{"budget", VT::integer},
                      {"seeds", VT::integer},
                      {"seed", VT::integer},
                      {"lambda0_nm", VT::number},
                      {"band_min_nm", VT::number},
                      {"band_max_nm", VT::number},
                      {"stencil_step_nm", VT::number},
                      {"weight_tau0", VT::number},
                      {"weight_d", VT::number},
                      {"weight_s", VT::number}}},
                    numerics()};
        case JobKind::solve_dispersion:
            return {job(),
                    {"profile",
                     true,
                     {{"shape", VT::text, true},
                      {"a1_um", VT::number, true},
                      {"delta1_pct", VT::number, true},
                      {"a2_um", VT::number},
                      {"w_um", VT::number},
                      {"delta2_pct", VT::number}}},
                    {"solve",
                     false,
                     {{"lambda0_nm", VT::number},
                      {"band_min_nm", VT::number},
                      {"band_max_nm", VT::number},
                      {"stencil_step_nm", VT::number}}},
                    numerics()};
    }
    return {};
}

}  // namespace schema

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorCode::Parse, msg); }

// A list of length 1 broadcasts to `n` entries.
inline std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, const std::string& key) {
    if (v.size() == n) return v;
    if (v.size() == 1) return std::vector<double>(n, v[0]);
    config_error("key '" + key + "' has " + std::to_string(v.size()) + " values, expected 1 or " + std::to_string(n));
}

inline MCFGeometry read_geometry(const Reader& r, std::optional<int> implied_cores) {
    MCFGeometry g;
    if (!r.has("geometry") && implied_cores == 1) g = MCFGeometry::single_core();
    if (const auto n = r.integer("geometry", "core_count")) g.core_count = static_cast<int>(*n);
    if (!r.has("geometry", "core_count") && implied_cores) g.core_count = *implied_cores;
    if (g.core_count == 1 && !r.has("geometry", "layout")) g.layout = Layout::single;
    g.cladding_diameter_um = r.number("geometry", "cladding_diameter_um", g.cladding_diameter_um);
    g.core_pitch_um = r.number("geometry", "pitch_um", g.core_pitch_um);
    g.core_radius_nominal_um = r.number("geometry", "core_radius_um", g.core_radius_nominal_um);
    if (const auto l = r.text("geometry", "layout")) {
        try {
            g.layout = parse_layout(*l);
        } catch (const Error&) {
            config_error("line " + std::to_string(r.line("geometry", "layout")) + ": key 'layout': unknown layout '" +
                         *l + "'");
        }
    }
    return g;
}

inline HeteroMCFSpec read_hetero(const Reader& r) {
    const bool listed = r.has("hetero", "d_ps_km_nm");
    const bool ramp = r.has("hetero", "d1_ps_km_nm") || r.has("hetero", "delta_d_ps_km_nm");
    if (listed == ramp)
        config_error("[hetero] needs either 'd_ps_km_nm' or both 'd1_ps_km_nm' and 'delta_d_ps_km_nm'");
    if (ramp && !(r.has("hetero", "d1_ps_km_nm") && r.has("hetero", "delta_d_ps_km_nm")))
        config_error("missing required key '" +
                     std::string(r.has("hetero", "d1_ps_km_nm") ? "delta_d_ps_km_nm" : "d1_ps_km_nm") +
                     "' in [hetero]");

    HeteroMCFSpec spec;
    spec.lambda0_nm = *r.number("hetero", "lambda0_nm");
    spec.length_km = *r.number("hetero", "length_km");
    std::vector<double> d;
    if (listed) {
        d = *r.numbers("hetero", "d_ps_km_nm");
        spec.geometry = read_geometry(r, static_cast<int>(d.size()));
    } else {
        spec.geometry = read_geometry(r, std::nullopt);
        for (const auto& c : assign_core_dispersions(spec.geometry.core_count, *r.number("hetero", "d1_ps_km_nm"),
                                                     *r.number("hetero", "delta_d_ps_km_nm")))
            d.push_back(c.d_ps_per_km_nm);
    }
    const auto n = d.size();
    const auto tau0 = broadcast(r.numbers("hetero", "tau0_ps_km").value_or(std::vector<double>{0.0}), n, "tau0_ps_km");
    const auto s = broadcast(r.numbers("hetero", "s_ps_km_nm2").value_or(std::vector<double>{0.0}), n, "s_ps_km_nm2");
    const bool relative = r.boolean("hetero", "relative").value_or(true);
    for (std::size_t i = 0; i < n; ++i) spec.cores.push_back({tau0[i], d[i], s[i], relative});
    return spec;
}

inline HeteroSource read_hetero_source(const Reader& r) {
    HeteroSource src;
    src.spec = read_hetero(r);
    src.lambda_m_nm = *r.number("operating", "lambda_m_nm");
    src.weights = broadcast(r.numbers("operating", "weights").value_or(std::vector<double>{1.0}),
                            src.spec.cores.size(), "weights");
    return src;
}

inline MulticavityDevice read_device(const Reader& r) {
    MulticavityDevice dev;
    const double n_g = r.number("device", "group_index", kDefaultGroupIndex);
    const bool explicit_gratings = r.has("device", "grating_core") || r.has("device", "grating_bragg_nm") ||
                                   r.has("device", "grating_position_mm");
    if (const auto preset = r.text("device", "preset")) {
        if (*preset != "reference")
            config_error("line " + std::to_string(r.line("device", "preset")) + ": key 'preset': unknown preset '" +
                         *preset + "' (known: reference)");
        if (explicit_gratings) config_error("[device] takes either 'preset' or explicit grating lists, not both");
        const auto refl = r.numbers("device", "grating_reflectivity").value_or(std::vector<double>{0.1});
        const auto len = r.numbers("device", "grating_length_mm").value_or(std::vector<double>{1.0});
        if (refl.size() != 1 || len.size() != 1)
            config_error("preset devices take a single 'grating_reflectivity' and 'grating_length_mm'");
        dev = build_paper_device(n_g, refl[0], len[0]);
    } else {
        for (const char* key : {"grating_core", "grating_bragg_nm", "grating_position_mm"})
            if (!r.has("device", key)) config_error("missing required key '" + std::string(key) + "' in [device]");
        const auto cores = *r.integers("device", "grating_core");
        const auto n = cores.size();
        const auto bragg = *r.numbers("device", "grating_bragg_nm");
        const auto pos = *r.numbers("device", "grating_position_mm");
        if (bragg.size() != n || pos.size() != n)
            config_error("[device] grating lists must have equal length");
        const auto refl = broadcast(r.numbers("device", "grating_reflectivity").value_or(std::vector<double>{0.1}), n,
                                    "grating_reflectivity");
        const auto len = broadcast(r.numbers("device", "grating_length_mm").value_or(std::vector<double>{1.0}), n,
                                   "grating_length_mm");
        dev.geometry = MCFGeometry::seven_core();
        dev.group_index = n_g;
        for (std::size_t i = 0; i < n; ++i)
            dev.gratings.push_back({static_cast<int>(cores[i]), bragg[i], pos[i], refl[i], len[i]});
    }
    dev.guard_band_nm = r.number("device", "guard_band_nm", kDefaultGuardBandNm);
    return dev;
}

inline FbgSource read_fbg_source(const Reader& r) {
    FbgSource src;
    src.device = read_device(r);
    const auto regime = *r.text("select", "regime");
    if (regime == "wavelength") {
        if (!r.has("select", "core_id")) config_error("missing required key 'core_id' in [select]");
        src.core_id = static_cast<int>(*r.integer("select", "core_id"));
    } else if (regime == "spatial") {
        if (!r.has("select", "bragg_nm")) config_error("missing required key 'bragg_nm' in [select]");
        src.spatial = true;
        src.bragg_nm = *r.number("select", "bragg_nm");
        src.tolerance_nm = r.number("select", "tolerance_nm", kDefaultMatchingToleranceNm);
    } else {
        config_error("line " + std::to_string(r.line("select", "regime")) + ": key 'regime': expected wavelength or spatial");
    }
    return src;
}

inline SolverNumerics read_numerics(const Reader& r) {
    SolverNumerics n;
    n.step_um = r.number("numerics", "step_um", n.step_um);
    n.growth = r.number("numerics", "growth", n.growth);
    n.domain_factor = r.number("numerics", "domain_factor", n.domain_factor);
    if (const auto v = r.integer("numerics", "refinement")) n.refinement = static_cast<int>(*v);
    return n;
}

inline SimulateFilterJob read_simulate_filter(const Reader& r) {
    SimulateFilterJob job;
    const int sources = int(r.has("taps")) + int(r.has("hetero")) + int(r.has("device"));
    if (sources != 1) config_error("simulate-filter needs exactly one tap source: [taps], [hetero] or [device]");
    if (r.has("taps")) {
        const auto delays = *r.numbers("taps", "delay_ps");
        const auto amps = broadcast(r.numbers("taps", "amplitude").value_or(std::vector<double>{1.0}), delays.size(),
                                    "amplitude");
        std::vector<Tap> taps;
        for (std::size_t i = 0; i < delays.size(); ++i) taps.push_back({delays[i], amps[i], "tap " + std::to_string(i)});
        job.source = TapSet(std::move(taps), "configured taps");
    } else if (r.has("hetero")) {
        if (!r.has("operating")) config_error("missing required section [operating]");
        job.source = read_hetero_source(r);
    } else {
        if (!r.has("select")) config_error("missing required section [select]");
        job.source = read_fbg_source(r);
    }
    job.grid.f_start_ghz = r.number("grid", "f_start_ghz", 0.0);
    job.grid.f_stop_ghz = *r.number("grid", "f_stop_ghz");
    if (const auto p = r.integer("grid", "points")) {
        if (*p < 2) config_error("line " + std::to_string(r.line("grid", "points")) + ": key 'points' must be >= 2");
        job.grid.points = static_cast<std::size_t>(*p);
    }
    return job;
}

inline Range read_range(const Reader& r, const std::string& min_key, const std::string& max_key, Range fallback) {
    return {r.number("box", min_key, fallback.min), r.number("box", max_key, fallback.max)};
}

inline DesignProfileJob read_design_profile(const Reader& r) {
    DesignProfileJob job;
    job.target = {*r.number("target", "tau0_ps_km"), *r.number("target", "d_ps_km_nm"),
                  *r.number("target", "s_ps_km_nm2"), false};
    auto& b = job.box;
    b.a1_um = read_range(r, "a1_min_um", "a1_max_um", b.a1_um);
    b.delta1_pct = read_range(r, "delta1_min_pct", "delta1_max_pct", b.delta1_pct);
    b.a2_um = read_range(r, "a2_min_um", "a2_max_um", b.a2_um);
    b.w_um = read_range(r, "w_min_um", "w_max_um", b.w_um);
    b.delta2_pct = r.number("box", "delta2_pct", b.delta2_pct);
    auto& o = job.options;
    if (const auto v = r.integer("fit", "budget")) o.budget = static_cast<int>(*v);
    if (const auto v = r.integer("fit", "seeds")) o.seeds = static_cast<int>(*v);
    if (const auto v = r.integer("fit", "seed")) o.seed = static_cast<std::uint64_t>(*v);
    o.lambda0_nm = r.number("fit", "lambda0_nm", o.lambda0_nm);
    o.band_min_nm = r.number("fit", "band_min_nm", o.band_min_nm);
    o.band_max_nm = r.number("fit", "band_max_nm", o.band_max_nm);
    o.stencil_step_nm = r.number("fit", "stencil_step_nm", o.stencil_step_nm);
    o.weights.tau0 = r.number("fit", "weight_tau0", o.weights.tau0);
    o.weights.d = r.number("fit", "weight_d", o.weights.d);
    o.weights.s = r.number("fit", "weight_s", o.weights.s);
    o.numerics = read_numerics(r);
    return job;
}

inline SolveDispersionJob read_solve_dispersion(const Reader& r) {
    SolveDispersionJob job;
    const auto shape = *r.text("profile", "shape");
    job.a1_um = *r.number("profile", "a1_um");
    job.delta1_pct = *r.number("profile", "delta1_pct");
    if (shape == "trench") {
        for (const char* key : {"a2_um", "w_um", "delta2_pct"})
            if (!r.has("profile", key)) config_error("missing required key '" + std::string(key) + "' in [profile]");
        job.trench = TrenchProfile{job.a1_um, job.delta1_pct, *r.number("profile", "a2_um"),
                                   *r.number("profile", "w_um"), *r.number("profile", "delta2_pct")};
    } else if (shape == "step") {
        for (const char* key : {"a2_um", "w_um", "delta2_pct"})
            if (r.has("profile", key))
                config_error("line " + std::to_string(r.line("profile", key)) + ": key '" + key +
                             "' only applies to shape = trench");
    } else {
        config_error("line " + std::to_string(r.line("profile", "shape")) + ": key 'shape': expected step or trench");
    }
    job.lambda0_nm = r.number("solve", "lambda0_nm", job.lambda0_nm);
    job.band_min_nm = r.number("solve", "band_min_nm", job.band_min_nm);
    job.band_max_nm = r.number("solve", "band_max_nm", job.band_max_nm);
    job.stencil_step_nm = r.number("solve", "stencil_step_nm", job.stencil_step_nm);
    job.numerics = read_numerics(r);
    return job;
}

}  // namespace detail

/// Parses and validates configuration text. Throws Error(Parse) naming the first offending key or line.
inline JobConfig parse_config(std::string_view text) {
    const auto doc = parse_document(text);
    const auto* job_section = doc.find("job");
    if (!job_section) detail::config_error("missing required section [job]");
    const auto kind_it = job_section->entries.find("kind");
    if (kind_it == job_section->entries.end()) detail::config_error("missing required key 'kind' in [job]");
    const auto kind = parse_job_kind(kind_it->second.value);
    if (!kind)
        detail::config_error("line " + std::to_string(kind_it->second.line) + ": key 'kind': unknown job kind '" +
                             kind_it->second.value + "'");

    validate_document(doc, schema::for_kind(*kind));
    const Reader r(doc);

    JobConfig cfg;
    cfg.kind = *kind;
    cfg.name = r.text("job", "name").value_or(std::string(to_string(*kind)));
    if (cfg.name.find_first_of("/\\") != std::string::npos || cfg.name == "." || cfg.name == "..")
        detail::config_error("line " + std::to_string(r.line("job", "name")) +
                             ": key 'name' must be a plain file stem");

    switch (*kind) {
        case JobKind::simulate_filter: cfg.job = detail::read_simulate_filter(r); break;
        case JobKind::taps_fbg: cfg.job = TapsFbgJob{detail::read_fbg_source(r)}; break;
        case JobKind::taps_hetero: cfg.job = TapsHeteroJob{detail::read_hetero_source(r)}; break;
        case JobKind::validate_hetero: {
            ValidateHeteroJob j;
            j.spec = detail::read_hetero(r);
            j.band_min_nm = *r.number("band", "min_nm");
            j.band_max_nm = *r.number("band", "max_nm");
            auto& t = j.tolerances;
            t.anchor_delay_spread_ps = r.number("tolerances", "anchor_spread_ps", t.anchor_delay_spread_ps);
            t.delta_d_rel_deviation = r.number("tolerances", "delta_d_rel", t.delta_d_rel_deviation);
            t.slope_variation = r.number("tolerances", "slope_variation_ps_km_nm2", t.slope_variation);
            t.quadratic_fraction = r.number("tolerances", "quadratic_fraction", t.quadratic_fraction);
            cfg.job = std::move(j);
            break;
        }
        case JobKind::validate_inscription: {
            ValidateInscriptionJob j;
            j.device = detail::read_device(r);
            j.beam = {*r.number("beam", "width_um"), *r.number("beam", "height_um")};
            auto& c = j.constraints;
            c.beam_width_max_um = r.number("constraints", "beam_width_max_um", c.beam_width_max_um);
            c.beam_height_min_um = r.number("constraints", "beam_height_min_um", c.beam_height_min_um);
            c.beam_height_max_um = r.number("constraints", "beam_height_max_um", c.beam_height_max_um);
            c.phase_mask_period_nm = r.number("constraints", "phase_mask_period_nm", c.phase_mask_period_nm);
            cfg.job = std::move(j);
            break;
        }
        case JobKind::design_spacing:
            cfg.job = DesignSpacingJob{*r.number("target", "fsr_ghz"),
                                       r.number("target", "group_index", kDefaultGroupIndex)};
            break;
        case JobKind::design_wavelength:
            cfg.job = DesignWavelengthJob{*r.number("target", "fsr_ghz"),
                                          *r.number("link", "delta_d_ps_km_nm"),
                                          r.number("link", "delta_s_ps_km_nm2", 0.0),
                                          *r.number("link", "length_km"),
                                          *r.number("link", "lambda0_nm"),
                                          r.number("link", "quadratic_fraction", 0.05)};
            break;
        case JobKind::design_profile: cfg.job = detail::read_design_profile(r); break;
        case JobKind::solve_dispersion: cfg.job = detail::read_solve_dispersion(r); break;
    }
    return cfg;
}

}  // namespace mcf::cli
