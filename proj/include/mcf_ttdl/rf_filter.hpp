#pragma once

// Incoherent N-tap microwave photonic filter: H(f) = sum_k a_k exp(-i 2 pi f tau_k).
// Frequencies in GHz, delays in ps (f * tau * 1e-3 is in cycles).

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/parallel.hpp"
#include "mcf_ttdl/tap_set.hpp"
#include "mcf_ttdl/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace mcf {

inline constexpr double kDefaultDbFloor = -120.0;
inline constexpr double kDefaultUniformityTolerance = 1e-3;

/// Response at a single frequency. Taps are summed in delay order.
inline std::complex<double> evaluate_response(const TapSet& taps, double f_ghz) {
    std::complex<double> h{0.0, 0.0};
    for (const auto& t : taps.taps()) {
        const double phase = -2.0 * kPi * f_ghz * t.delay_ps * 1e-3;
        h += t.amplitude * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return h;
}

struct FilterResponse {
    std::vector<double> freq_ghz;
    std::vector<std::complex<double>> h;
    double raw_peak = 0.0;                 // max |H| on the grid
    std::optional<TapSet> source;          // when present, metrics refine off-grid
    double db_floor = kDefaultDbFloor;

    double magnitude_db(std::size_t i) const {
        const double m = std::abs(h[i]);
        if (raw_peak <= 0.0 || m <= 0.0) return db_floor;
        return std::max(db_floor, 20.0 * std::log10(m / raw_peak));
    }
    double phase_rad(std::size_t i) const { return std::arg(h[i]); }
    std::size_t size() const { return freq_ghz.size(); }
};

/// Evaluates the filter on a uniform grid with inclusive endpoints.
inline FilterResponse transfer_function(const TapSet& taps, double f_start_ghz, double f_stop_ghz,
                                        std::size_t n_points, unsigned threads = 1) {
    detail::require(taps.size() >= 1, ErrorCode::InvalidArgument, "empty tap set");
    detail::require_finite(f_start_ghz, "f_start_ghz");
    detail::require_finite(f_stop_ghz, "f_stop_ghz");
    detail::require(n_points >= 2, ErrorCode::InvalidArgument, "n_points must be >= 2");
    detail::require(f_start_ghz >= 0.0 && f_stop_ghz > f_start_ghz, ErrorCode::InvalidArgument,
                    "frequency grid must satisfy 0 <= f_start < f_stop");
    FilterResponse r;
    r.source = taps;
    r.freq_ghz.resize(n_points);
    r.h.resize(n_points);
    const double step = (f_stop_ghz - f_start_ghz) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i)
        r.freq_ghz[i] = (i + 1 == n_points) ? f_stop_ghz : f_start_ghz + step * static_cast<double>(i);
    // Chunked so each point is computed by one thread with the same per-tap order.
    const std::size_t chunk = 256;
    const std::size_t chunks = (n_points + chunk - 1) / chunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(n_points, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) r.h[i] = evaluate_response(taps, r.freq_ghz[i]);
    });
    for (const auto& v : r.h) r.raw_peak = std::max(r.raw_peak, std::abs(v));
    return r;
}

namespace detail {

// Golden-section search for an extremum of g on [a, b]; sign = +1 maximizes, -1 minimizes.
template <class G>
double golden_section(G&& g, double a, double b, double sign) {
    const double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double gc = sign * g(c), gd = sign * g(d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * (std::abs(a) + std::abs(b) + 1e-12); ++it) {
        if (gc > gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = sign * g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = sign * g(d);
        }
    }
    return 0.5 * (a + b);
}

inline std::vector<double> grid_magnitudes(const FilterResponse& r) {
    std::vector<double> m(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) m[i] = std::abs(r.h[i]);
    return m;
}

// Local maxima of |H| within -3 dB of the grid peak. |H| is even in f, so a grid
// starting at f = 0 has a genuine extremum there; any other endpoint is a truncated
// lobe and never counts.
inline std::vector<std::size_t> passband_peaks(const FilterResponse& r, const std::vector<double>& m) {
    std::vector<std::size_t> out;
    const double thr = r.raw_peak / std::sqrt(2.0);
    const std::size_t n = m.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (i == 0 && r.freq_ghz[0] != 0.0) continue;
        const bool left_ok = i == 0 || m[i] >= m[i - 1];
        if (left_ok && m[i] > m[i + 1] && m[i] >= thr) {
            // Plateaus: keep only the first index of a run.
            if (!out.empty() && out.back() + 1 == i) continue;
            out.push_back(i);
        }
    }
    return out;
}

// d|H|^2/df up to a positive factor: Re(conj(H) dH/df).
inline double power_slope(const TapSet& taps, double f_ghz) {
    std::complex<double> h{0.0, 0.0}, dh{0.0, 0.0};
    for (const auto& t : taps.taps()) {
        const double w = 2.0 * kPi * t.delay_ps * 1e-3;
        const auto e = t.amplitude * std::complex<double>(std::cos(w * f_ghz), -std::sin(w * f_ghz));
        h += e;
        dh += std::complex<double>(0.0, -w) * e;
    }
    return (std::conj(h) * dh).real();
}

// Refines a grid extremum at index i (sign +1 maximum, -1 minimum); continuous when the
// tap set is known: bisection on the sign of d|H|^2/df, golden section if not bracketed.
inline double refine_extremum(const FilterResponse& r, std::size_t i, double sign) {
    const std::size_t n = r.size();
    if (i == 0 && r.freq_ghz[0] == 0.0) return 0.0;
    const double lo = r.freq_ghz[i == 0 ? 0 : i - 1];
    const double hi = r.freq_ghz[i + 1 == n ? n - 1 : i + 1];
    if (r.source) {
        const auto& taps = *r.source;
        double a = lo, b = hi;
        const double ga = sign * power_slope(taps, a), gb = sign * power_slope(taps, b);
        if (ga > 0.0 && gb < 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                (sign * power_slope(taps, mid) > 0.0 ? a : b) = mid;
            }
            return 0.5 * (a + b);
        }
        return golden_section([&](double f) { return std::norm(evaluate_response(taps, f)); }, lo, hi, sign);
    }
    if (i == 0 || i + 1 == n) return r.freq_ghz[i];
    // Parabolic vertex through the three grid samples.
    const double y0 = std::abs(r.h[i - 1]), y1 = std::abs(r.h[i]), y2 = std::abs(r.h[i + 1]);
    const double den = y0 - 2.0 * y1 + y2;
    if (den == 0.0) return r.freq_ghz[i];
    const double step = r.freq_ghz[i + 1] - r.freq_ghz[i];
    return r.freq_ghz[i] + 0.5 * step * (y0 - y2) / den;
}

inline double magnitude_at(const FilterResponse& r, double f, std::size_t near_index) {
    if (r.source) return std::abs(evaluate_response(*r.source, f));
    return std::abs(r.h[near_index]);
}

}  // namespace detail

struct FsrEstimate {
    double fsr_ghz = 0.0;
    std::string method;  // "analytic" or "spectral"
};

/// FSR from detected passband peaks of the synthesized response over about four
/// putative periods (period guess = inverse mean tap spacing).
inline double fsr_spectral(const TapSet& taps, std::size_t points_per_period = 400) {
    detail::require(taps.size() >= 2, ErrorCode::InvalidArgument, "FSR needs at least 2 taps");
    const double guess = fsr_ghz_from_delay_ps(taps.mean_spacing_ps());
    const auto resp = transfer_function(taps, 0.0, 4.0 * guess, 4 * points_per_period + 1);
    const auto m = detail::grid_magnitudes(resp);
    const auto peaks = detail::passband_peaks(resp, m);
    if (peaks.size() < 2)
        throw Error(ErrorCode::PeriodCoverage, "fewer than two passband peaks over four putative periods");
    const double first = detail::refine_extremum(resp, peaks.front(), +1.0);
    const double last = detail::refine_extremum(resp, peaks.back(), +1.0);
    return (last - first) / static_cast<double>(peaks.size() - 1);
}

inline FsrEstimate fsr_estimate(const TapSet& taps, double uniformity_tolerance = kDefaultUniformityTolerance) {
    detail::require(taps.size() >= 2, ErrorCode::InvalidArgument, "FSR needs at least 2 taps");
    if (taps.is_uniform(uniformity_tolerance)) return {fsr_ghz_from_delay_ps(taps.mean_spacing_ps()), "analytic"};
    return {fsr_spectral(taps), "spectral"};
}

struct ResponseMetrics {
    double sidelobe_level_db = kDefaultDbFloor;
    double bandwidth_3db_ghz = 0.0;
    double null_depth_db = kDefaultDbFloor;
    double passband_spacing_ghz = 0.0;
};

/// Sidelobe level, main-lobe 3-dB bandwidth and deepest null, all relative to the
/// passband peak. Needs two passband peaks on the grid (one full period).
inline ResponseMetrics response_metrics(const FilterResponse& r) {
    detail::require(r.size() >= 3, ErrorCode::InvalidArgument, "response grid too small");
    const auto m = detail::grid_magnitudes(r);
    const auto peaks = detail::passband_peaks(r, m);
    if (peaks.size() < 2)
        throw Error(ErrorCode::PeriodCoverage, "response covers less than one full period (fewer than two passbands)");

    const std::size_t p0 = peaks[0], p1 = peaks[1];
    const double f0 = detail::refine_extremum(r, p0, +1.0);
    const double f1 = detail::refine_extremum(r, p1, +1.0);
    const double peak = std::max(detail::magnitude_at(r, f0, p0), detail::magnitude_at(r, f1, p1));
    auto to_db = [&](double mag) {
        if (mag <= 0.0 || peak <= 0.0) return r.db_floor;
        return std::max(r.db_floor, 20.0 * std::log10(mag / peak));
    };

    ResponseMetrics out;
    out.passband_spacing_ghz = f1 - f0;

    double side = 0.0, null = std::numeric_limits<double>::infinity();
    for (std::size_t i = p0 + 1; i < p1; ++i) {
        if (m[i] >= m[i - 1] && m[i] > m[i + 1]) {
            const double f = detail::refine_extremum(r, i, +1.0);
            side = std::max(side, detail::magnitude_at(r, f, i));
        }
        if (m[i] <= m[i - 1] && m[i] < m[i + 1]) {
            const double f = detail::refine_extremum(r, i, -1.0);
            null = std::min(null, detail::magnitude_at(r, f, i));
        }
    }
    out.sidelobe_level_db = side > 0.0 ? to_db(side) : r.db_floor;
    out.null_depth_db = std::isfinite(null) ? to_db(null) : r.db_floor;

    // Main lobe: the first interior passband, or the DC lobe mirrored about f = 0.
    const bool dc_lobe = p0 == 0 && r.freq_ghz[0] == 0.0;
    const std::size_t pc = (p0 == 0 && !dc_lobe) ? p1 : p0;
    const double fc = (pc == p0) ? f0 : f1;
    const double half = peak / std::sqrt(2.0);
    auto crossing = [&](long dir) -> std::optional<double> {
        long i = static_cast<long>(pc);
        const long n = static_cast<long>(r.size());
        while (i + dir >= 0 && i + dir < n && m[static_cast<std::size_t>(i + dir)] >= half) i += dir;
        if (i + dir < 0 || i + dir >= n) return std::nullopt;
        double a = r.freq_ghz[static_cast<std::size_t>(i)], b = r.freq_ghz[static_cast<std::size_t>(i + dir)];
        if (r.source) {
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (a + b);
                (std::abs(evaluate_response(*r.source, mid)) >= half ? a : b) = mid;
            }
            return 0.5 * (a + b);
        }
        const double ya = m[static_cast<std::size_t>(i)], yb = m[static_cast<std::size_t>(i + dir)];
        return a + (b - a) * (ya - half) / (ya - yb);
    };
    const auto right = crossing(+1);
    if (dc_lobe) {
        if (right) out.bandwidth_3db_ghz = 2.0 * (*right - fc);
    } else {
        const auto left = crossing(-1);
        if (left && right) out.bandwidth_3db_ghz = *right - *left;
    }
    return out;
}

}  // namespace mcf
