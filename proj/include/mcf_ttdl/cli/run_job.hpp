#pragma once

// Job execution and output writing.
//
// Output files land in the output directory as <name>.<suffix>:
//   *.response.csv  schema_version,kind / 1,<kind> / freq_ghz,mag_db,phase_rad
//   *.taps.csv      schema_version,kind / 1,<kind> / tap_index,delay_ps,amplitude,label
//   *.txt           key=value records starting with schema_version and kind
// Numbers use the shortest decimal that round-trips (std::to_chars).

#include "mcf_ttdl/cli/job_config.hpp"
#include "mcf_ttdl/format.hpp"
#include "mcf_ttdl/rf_filter.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mcf::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitValidationFailed = 1, kExitInputError = 2, kExitIoError = 3 };

struct OutputFile {
    std::string filename;
    std::string contents;
};

struct JobOutcome {
    int exit_code = kExitOk;
    std::string summary;  // one line, prefixed with the job kind
    std::vector<std::string> written;
};

class Record {
public:
    Record(JobKind kind, const std::string& name) {
        add("schema_version", std::to_string(kSchemaVersion));
        add("kind", std::string(to_string(kind)));
        add("name", name);
    }
    Record& add(const std::string& key, const std::string& value) {
        out_ << key << '=' << value << '\n';
        return *this;
    }
    Record& add(const std::string& key, double value) { return add(key, format_double(value)); }
    Record& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, std::size_t value) { return add(key, std::to_string(value)); }
    Record& add(const std::string& key, bool value) { return add(key, std::string(value ? "true" : "false")); }
    Record& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    Record& add(const std::string& key, const std::vector<double>& values) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
        return add(key, s);
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline std::string csv_preamble(JobKind kind) {
    return "schema_version,kind\n" + std::to_string(kSchemaVersion) + "," + std::string(to_string(kind)) + "\n";
}

inline std::string taps_csv(JobKind kind, const TapSet& taps) {
    std::string s = csv_preamble(kind) + "tap_index,delay_ps,amplitude,label\n";
    for (std::size_t i = 0; i < taps.size(); ++i)
        s += std::to_string(i) + "," + format_double(taps[i].delay_ps) + "," + format_double(taps[i].amplitude) + "," +
             csv_field(taps[i].label) + "\n";
    return s;
}

inline std::string response_csv(JobKind kind, const FilterResponse& r) {
    std::string s = csv_preamble(kind) + "freq_ghz,mag_db,phase_rad\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        s += format_double(r.freq_ghz[i]) + "," + format_double(r.magnitude_db(i)) + "," +
             format_double(r.phase_rad(i)) + "\n";
    return s;
}

inline TapSet build_taps(const HeteroSource& s) { return tap_set_spatial(s.spec, s.lambda_m_nm, s.weights); }

inline TapSet build_taps(const FbgSource& s) {
    return s.spatial ? tap_set_spatial_diversity(s.device, s.bragg_nm, s.tolerance_nm)
                     : tap_set_wavelength_diversity(s.device, s.core_id);
}

inline TapSet build_taps(const TapSet& t) { return t; }

inline void add_tap_summary(Record& rec, const TapSet& taps) {
    rec.add("tap_count", taps.size());
    if (taps.size() < 2) return;
    rec.add("mean_spacing_ps", taps.mean_spacing_ps());
    rec.add("uniform", taps.is_uniform(kDefaultUniformityTolerance));
    const auto fsr = fsr_estimate(taps);
    rec.add("fsr_ghz", fsr.fsr_ghz);
    rec.add("fsr_method", fsr.method);
}

struct Produced {
    std::vector<OutputFile> files;
    bool validation_failed = false;
    std::string note;  // appended to the summary line
};

inline Produced run(const JobConfig& cfg, const SimulateFilterJob& job, unsigned threads) {
    const auto taps = std::visit([](const auto& s) { return build_taps(s); }, job.source);
    const auto resp = transfer_function(taps, job.grid.f_start_ghz, job.grid.f_stop_ghz, job.grid.points, threads);
    Record rec(cfg.kind, cfg.name);
    add_tap_summary(rec, taps);
    rec.add("grid_points", job.grid.points);
    try {
        const auto m = response_metrics(resp);
        rec.add("peak_spacing_ghz", m.passband_spacing_ghz);
        rec.add("sidelobe_level_db", m.sidelobe_level_db);
        rec.add("bandwidth_3db_ghz", m.bandwidth_3db_ghz);
        rec.add("null_depth_db", m.null_depth_db);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PeriodCoverage) throw;
        rec.add("metrics", "unavailable");
        rec.add("metrics_reason", e.what());
    }
    return {{{cfg.name + ".response.csv", response_csv(cfg.kind, resp)},
             {cfg.name + ".taps.csv", taps_csv(cfg.kind, taps)},
             {cfg.name + ".metrics.txt", rec.str()}},
            false,
            "taps=" + std::to_string(taps.size())};
}

template <class Source>
Produced run_taps(const JobConfig& cfg, const Source& src) {
    const auto taps = build_taps(src);
    Record rec(cfg.kind, cfg.name);
    rec.add("label", taps.label());
    add_tap_summary(rec, taps);
    return {{{cfg.name + ".taps.csv", taps_csv(cfg.kind, taps)}, {cfg.name + ".summary.txt", rec.str()}},
            false,
            "taps=" + std::to_string(taps.size())};
}

inline Produced run(const JobConfig& cfg, const TapsFbgJob& job, unsigned) { return run_taps(cfg, job.source); }
inline Produced run(const JobConfig& cfg, const TapsHeteroJob& job, unsigned) { return run_taps(cfg, job.source); }

inline Produced run(const JobConfig& cfg, const ValidateHeteroJob& job, unsigned) {
    const auto rep = validate_hetero_spec(job.spec, job.band_min_nm, job.band_max_nm, job.tolerances);
    Record rec(cfg.kind, cfg.name);
    rec.add("pass", rep.pass);
    rec.add("anchor_delay_spread_ps", rep.anchor_delay_spread_ps);
    rec.add("anchor_ok", rep.anchor_ok);
    rec.add("delta_d_values_ps_km_nm", rep.delta_d_values);
    rec.add("delta_d_max_deviation", rep.delta_d_max_deviation);
    rec.add("delta_d_ok", rep.delta_d_ok);
    rec.add("slope_variation_max_ps_km_nm2", rep.slope_variation_max);
    rec.add("slope_ok", rep.slope_ok);
    rec.add("quadratic_fraction_max", rep.quadratic_fraction_max);
    rec.add("quadratic_ok", rep.quadratic_ok);
    rec.add("d_ordering_ok", rep.d_ordering_ok);
    return {{{cfg.name + ".report.txt", rec.str()}}, !rep.pass, rep.pass ? "pass" : "fail"};
}

inline Produced run(const JobConfig& cfg, const ValidateInscriptionJob& job, unsigned) {
    const auto rep = validate_inscription_plan(job.device, job.constraints, job.beam);
    Record rec(cfg.kind, cfg.name);
    rec.add("pass", rep.pass());
    for (const auto& [k, v] : rep.metrics) rec.add(k, v);
    rec.add("violation_count", rep.violations.size());
    std::string rules;
    for (std::size_t i = 0; i < rep.violations.size(); ++i) {
        const auto& v = rep.violations[i];
        const auto prefix = "violation." + std::to_string(i + 1) + ".";
        rec.add(prefix + "rule", v.rule).add(prefix + "detail", v.detail).add(prefix + "margin", v.margin);
        if (rules.find(v.rule) == std::string::npos) rules += (rules.empty() ? "" : ",") + v.rule;
    }
    return {{{cfg.name + ".report.txt", rec.str()}},
            !rep.pass(),
            rep.pass() ? std::string("pass") : "fail rules=" + rules};
}

inline Produced run(const JobConfig& cfg, const DesignSpacingJob& job, unsigned) {
    const double d = spacing_for_fsr(job.fsr_ghz, job.group_index);
    const double tau = round_trip_delay_ps(d, job.group_index);
    Record rec(cfg.kind, cfg.name);
    rec.add("target_fsr_ghz", job.fsr_ghz)
        .add("group_index", job.group_index)
        .add("spacing_mm", d)
        .add("round_trip_delay_ps", tau)
        .add("check_fsr_ghz", fsr_ghz_from_delay_ps(tau));
    return {{{cfg.name + ".design.txt", rec.str()}}, false, "spacing_mm=" + format_double(d)};
}

inline Produced run(const JobConfig& cfg, const DesignWavelengthJob& job, unsigned) {
    const auto w = wavelength_for_fsr_hetero(job.delta_d, job.length_km, job.lambda0_nm, job.fsr_ghz, job.delta_s,
                                             job.quadratic_tolerance);
    const double x = w.lambda_m_nm - job.lambda0_nm;
    const double dtau = job.length_km * (job.delta_d * x + 0.5 * job.delta_s * x * x);
    Record rec(cfg.kind, cfg.name);
    rec.add("target_fsr_ghz", job.fsr_ghz)
        .add("lambda_m_nm", w.lambda_m_nm)
        .add("differential_delay_ps", dtau)
        .add("check_fsr_ghz", fsr_ghz_from_delay_ps(std::abs(dtau)))
        .add("quadratic_fraction", w.quadratic_fraction)
        .add("newton_steps", w.newton_steps);
    return {{{cfg.name + ".design.txt", rec.str()}}, false, "lambda_m_nm=" + format_double(w.lambda_m_nm)};
}

inline Produced run(const JobConfig& cfg, const DesignProfileJob& job, unsigned threads) {
    auto opt = job.options;
    opt.threads = threads;
    opt.numerics.threads = 1;
    const auto fit = fit_profile_to_dispersion(job.target, job.box, opt);
    Record rec(cfg.kind, cfg.name);
    rec.add("a1_um", fit.profile.a1_um)
        .add("delta1_pct", fit.profile.delta1_pct)
        .add("a2_um", fit.profile.a2_um)
        .add("w_um", fit.profile.w_um)
        .add("delta2_pct", fit.profile.delta2_pct)
        .add("achieved_tau0_ps_km", fit.achieved.tau0_ps_per_km)
        .add("achieved_d_ps_km_nm", fit.achieved.d_ps_per_km_nm)
        .add("achieved_s_ps_km_nm2", fit.achieved.s_ps_per_km_nm2)
        .add("target_tau0_ps_km", job.target.tau0_ps_per_km)
        .add("target_d_ps_km_nm", job.target.d_ps_per_km_nm)
        .add("target_s_ps_km_nm2", job.target.s_ps_per_km_nm2)
        .add("objective", fit.objective)
        .add("initial_objective", fit.initial_objective)
        .add("iterations", fit.iterations)
        .add("evaluations", fit.evaluations)
        .add("converged", fit.converged)
        .add("seed", std::to_string(fit.seed));
    return {{{cfg.name + ".design.txt", rec.str()}}, false, "objective=" + format_double(fit.objective)};
}

inline Produced run(const JobConfig& cfg, const SolveDispersionJob& job, unsigned threads) {
    const auto profile = job.trench ? RadialIndexProfile::from_trench(*job.trench)
                                    : RadialIndexProfile::step_index(job.a1_um, job.delta1_pct);
    auto num = job.numerics;
    num.threads = threads;
    const auto mode = solve_lp01(profile, job.lambda0_nm, num);
    const auto disp =
        dispersion_from_profile(profile, job.lambda0_nm, job.band_min_nm, job.band_max_nm, job.stencil_step_nm, num);
    Record rec(cfg.kind, cfg.name);
    rec.add("shape", job.trench ? "trench" : "step")
        .add("lambda0_nm", job.lambda0_nm)
        .add("n_eff", mode.n_eff)
        .add("cells", mode.cells)
        .add("domain_radius_um", mode.domain_radius_um)
        .add("tau0_ps_km", disp.tau0_ps_per_km)
        .add("d_ps_km_nm", disp.d_ps_per_km_nm)
        .add("s_ps_km_nm2", disp.s_ps_per_km_nm2)
        .add("stencil_step_nm", job.stencil_step_nm);
    return {{{cfg.name + ".dispersion.txt", rec.str()}}, false, "d_ps_km_nm=" + format_double(disp.d_ps_per_km_nm)};
}

inline std::string one_line(std::string s) {
    for (auto& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

}  // namespace detail

/// Writes files into `dir`, creating it if needed. Throws std::runtime_error on failure.
inline std::vector<std::string> write_outputs(const std::filesystem::path& dir, const std::vector<OutputFile>& files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    std::vector<std::string> written;
    for (const auto& f : files) {
        const auto path = dir / f.filename;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << f.contents;
        out.close();
        if (!out) throw std::runtime_error("cannot write " + path.string());
        written.push_back(path.string());
    }
    return written;
}

/// Runs one job and writes its outputs. Never throws.
inline JobOutcome run_job(const JobConfig& cfg, const std::filesystem::path& out_dir, unsigned threads = 1) {
    const std::string kind(to_string(cfg.kind));
    JobOutcome outcome;
    detail::Produced produced;
    try {
        produced = std::visit([&](const auto& job) { return detail::run(cfg, job, threads); }, cfg.job);
    } catch (const Error& e) {
        outcome.exit_code = kExitInputError;
        outcome.summary = kind + ": error[" + std::string(to_string(e.code())) + "]: " + detail::one_line(e.what());
        return outcome;
    } catch (const std::exception& e) {
        outcome.exit_code = kExitInputError;
        outcome.summary = kind + ": error[internal]: " + detail::one_line(e.what());
        return outcome;
    }
    try {
        outcome.written = write_outputs(out_dir, produced.files);
    } catch (const std::exception& e) {
        outcome.exit_code = kExitIoError;
        outcome.summary = kind + ": error[io]: " + detail::one_line(e.what());
        return outcome;
    }
    outcome.exit_code = produced.validation_failed ? kExitValidationFailed : kExitOk;
    outcome.summary = kind + ": " + (produced.validation_failed ? "" : "ok ") + produced.note +
                      " files=" + std::to_string(outcome.written.size());
    return outcome;
}

}  // namespace mcf::cli
