#pragma once

// Scalar LP01 mode solver for radially layered, weakly guiding fibers and the
// profile -> (tau0, D, S) mapping built on it.
//
// The radial equation  (1/r)(r psi')' + k^2 n(r)^2 psi = beta^2 psi  is discretized
// with cell-centered finite volumes. Cell faces sit on every layer interface, so
// each cell has a single index value. Cells are uniform inside the layered region
// and grow geometrically out to the domain edge, where the field is matched to the
// exterior K0(gamma r) decay through a Robin condition that is iterated to a fixed
// point in gamma. The largest eigenvalue is bracketed by Sturm-count bisection,
// polished with inverse iteration, and evaluated as a gradient-form Rayleigh quotient
// relative to the cladding line so n_eff stays smooth in wavelength to ~1e-15.

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/format.hpp"
#include "mcf_ttdl/material.hpp"
#include "mcf_ttdl/mcf_model.hpp"
#include "mcf_ttdl/parallel.hpp"
#include "mcf_ttdl/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mcf {

/// One annulus ending at `outer_radius_um` with index n_clad(lambda) * (1 + relative_offset).
struct IndexLayer {
    double outer_radius_um = 0.0;
    double relative_offset = 0.0;
};

/// Finite layers from the axis outward; everything beyond the last layer is cladding.
class RadialIndexProfile {
public:
    RadialIndexProfile(std::vector<IndexLayer> layers, MaterialModel material = MaterialModel::fused_silica())
        : layers_(std::move(layers)), material_(std::move(material)) {
        detail::require(!layers_.empty(), ErrorCode::InvalidArgument, "profile needs at least one layer");
        double prev = 0.0;
        for (const auto& l : layers_) {
            detail::require_finite(l.outer_radius_um, "layer radius");
            detail::require_finite(l.relative_offset, "layer offset");
            detail::require(l.outer_radius_um > prev, ErrorCode::InvalidArgument,
                            "layer radii must be strictly increasing");
            detail::require(l.relative_offset > -0.5, ErrorCode::InvalidArgument, "layer offset out of range");
            prev = l.outer_radius_um;
        }
    }

    /// Step-index core of radius `a_um`, raised by `delta_pct` percent. delta 0 is allowed (unguided).
    static RadialIndexProfile step_index(double a_um, double delta_pct,
                                         MaterialModel material = MaterialModel::fused_silica()) {
        detail::require(delta_pct >= 0.0, ErrorCode::InvalidArgument, "step-index delta must be >= 0");
        return RadialIndexProfile({{a_um, delta_pct / 100.0}}, std::move(material));
    }

    static RadialIndexProfile from_trench(const TrenchProfile& p, MaterialModel material = MaterialModel::fused_silica()) {
        check(p);
        return RadialIndexProfile({{p.a1_um, p.delta1_pct / 100.0},
                                   {p.trench_inner_um(), 0.0},
                                   {p.trench_outer_um(), -p.delta2_pct / 100.0}},
                                  std::move(material));
    }

    const std::vector<IndexLayer>& layers() const { return layers_; }
    const MaterialModel& material() const { return material_; }
    double outermost_radius_um() const { return layers_.back().outer_radius_um; }

    double cladding_index(double lambda_nm) const { return material_index(material_, lambda_nm); }

    double max_index(double lambda_nm) const {
        double off = 0.0;
        for (const auto& l : layers_) off = std::max(off, l.relative_offset);
        return cladding_index(lambda_nm) * (1.0 + off);
    }

private:
    std::vector<IndexLayer> layers_;
    MaterialModel material_;
};

struct SolverNumerics {
    double step_um = 0.02;        // cell size inside the layered region
    double growth = 1.05;         // geometric growth of exterior cells
    double domain_factor = 6.0;   // domain radius / outermost layer radius
    int refinement = 0;           // every cell split into 2^refinement equal cells
    int max_bc_iterations = 40;
    double bc_tolerance = 1e-15;  // relative change in beta^2 between Robin updates
    unsigned threads = 1;         // for multi-wavelength work; 0 = auto
};

struct ModeSolution {
    double n_eff = 0.0;
    double lambda_nm = 0.0;
    bool converged = false;
    std::size_t cells = 0;
    double domain_radius_um = 0.0;
    double min_step_um = 0.0;
    int bc_iterations = 0;
};

namespace detail {

struct RadialGrid {
    std::vector<double> faces;          // size N+1, faces[0] = 0
    std::vector<double> centers;        // size N
    std::vector<double> relative_offset;  // per cell
};

inline RadialGrid build_grid(const RadialIndexProfile& p, const SolverNumerics& num) {
    require(num.step_um > 0.0 && num.growth >= 1.0 && num.domain_factor > 1.0 && num.refinement >= 0,
            ErrorCode::InvalidArgument, "invalid solver numerics");
    std::vector<double> faces{0.0};
    std::vector<double> offsets;
    double inner = 0.0;
    for (const auto& l : p.layers()) {
        const double width = l.outer_radius_um - inner;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(width / num.step_um - 1e-9)));
        for (std::size_t i = 1; i <= n; ++i) {
            faces.push_back(i == n ? l.outer_radius_um : inner + width * static_cast<double>(i) / static_cast<double>(n));
            offsets.push_back(l.relative_offset);
        }
        inner = l.outer_radius_um;
    }

    const double r_out = p.outermost_radius_um();
    const double span = (num.domain_factor - 1.0) * r_out;
    std::vector<double> sizes;
    double h = num.step_um, total = 0.0;
    while (total < span) {
        sizes.push_back(h);
        total += h;
        h *= num.growth;
    }
    const double scale = span / total;
    double r = r_out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        r = (i + 1 == sizes.size()) ? num.domain_factor * r_out : r + sizes[i] * scale;
        faces.push_back(r);
        offsets.push_back(0.0);
    }

    RadialGrid g;
    const int split = 1 << num.refinement;
    g.faces.push_back(0.0);
    for (std::size_t c = 0; c + 1 < faces.size(); ++c) {
        for (int s = 1; s <= split; ++s) {
            g.faces.push_back(s == split ? faces[c + 1] : faces[c] + (faces[c + 1] - faces[c]) * s / split);
            g.relative_offset.push_back(offsets[c]);
        }
    }
    for (std::size_t c = 0; c + 1 < g.faces.size(); ++c) g.centers.push_back(0.5 * (g.faces[c] + g.faces[c + 1]));
    return g;
}

// K1(x)/K0(x), switching to the large-argument expansion before K0 underflows.
inline double bessel_k_ratio(double x) {
    if (x < 500.0) return std::cyl_bessel_k(1.0, x) / std::cyl_bessel_k(0.0, x);
    const double u = 1.0 / (8.0 * x);
    // K_nu ~ (1 + (4nu^2-1)/(8x) + (4nu^2-1)(4nu^2-9)/(2 (8x)^2) + ...)
    const double k0 = 1.0 - u + 9.0 / 2.0 * u * u;
    const double k1 = 1.0 + 3.0 * u - 15.0 / 2.0 * u * u;
    return k1 / k0;
}

// Discrete operator in the symmetric form T = V^{-1/2} A V^{-1/2}, shifted by k^2 n_cl^2.
struct Operator {
    std::vector<double> diag;      // size N (A_ii / V_i - k^2 n_cl^2)
    std::vector<double> off;       // size N-1
    std::vector<double> volume;    // V_i
    std::vector<double> coupling;  // t_i = f_{i+1} / (c_{i+1} - c_i)
    std::vector<double> excess;    // k^2 (n_i^2 - n_cl^2)
    double boundary = 0.0;         // Robin term added to the last row of A
};

inline Operator assemble(const RadialGrid& g, double k, double n_cl, double robin) {
    const std::size_t n = g.centers.size();
    Operator op;
    op.diag.resize(n);
    op.off.resize(n - 1);
    op.volume.resize(n);
    op.coupling.resize(n - 1);
    op.excess.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        op.volume[i] = 0.5 * (g.faces[i + 1] * g.faces[i + 1] - g.faces[i] * g.faces[i]);
        const double ni = n_cl * (1.0 + g.relative_offset[i]);
        op.excess[i] = k * k * (ni * ni - n_cl * n_cl);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) op.coupling[i] = g.faces[i + 1] / (g.centers[i + 1] - g.centers[i]);
    const double r_edge = g.faces[n];
    const double delta = r_edge - g.centers[n - 1];
    op.boundary = r_edge * robin / (1.0 + robin * delta);
    for (std::size_t i = 0; i < n; ++i) {
        double a = op.excess[i] * op.volume[i];
        if (i > 0) a -= op.coupling[i - 1];
        if (i + 1 < n) a -= op.coupling[i];
        if (i + 1 == n) a -= op.boundary;
        op.diag[i] = a / op.volume[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) op.off[i] = op.coupling[i] / std::sqrt(op.volume[i] * op.volume[i + 1]);
    return op;
}

// Number of eigenvalues of the tridiagonal operator strictly below x.
inline std::size_t sturm_count_below(const Operator& op, double x) {
    std::size_t count = 0;
    double q = op.diag[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < op.diag.size(); ++i) {
        const double prev = (q == 0.0) ? std::numeric_limits<double>::epsilon() * (std::abs(op.diag[i - 1]) + 1.0) : q;
        q = op.diag[i] - x - op.off[i - 1] * op.off[i - 1] / prev;
        if (q < 0) ++count;
    }
    return count;
}

inline double largest_eigenvalue_bisect(const Operator& op) {
    const std::size_t n = op.diag.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(op.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(op.off[i]) : 0.0);
        lo = std::min(lo, op.diag[i] - r);
        hi = std::max(hi, op.diag[i] + r);
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count_below(op, mid) == n)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Eigenvector (in psi variables) for the eigenvalue closest to sigma, by inverse iteration.
inline std::vector<double> inverse_iteration(const Operator& op, double sigma) {
    const std::size_t n = op.diag.size();
    std::vector<double> phi(n, 1.0), c(n), d(n), y(n);
    for (int it = 0; it < 3; ++it) {
        // Thomas solve of (T - sigma I) y = phi; a vanishing pivot is nudged off zero.
        double tiny = std::numeric_limits<double>::epsilon() * (std::abs(sigma) + 1.0);
        double piv = op.diag[0] - sigma;
        if (std::abs(piv) < tiny) piv = tiny;
        c[0] = n > 1 ? op.off[0] / piv : 0.0;
        d[0] = phi[0] / piv;
        for (std::size_t i = 1; i < n; ++i) {
            piv = op.diag[i] - sigma - op.off[i - 1] * c[i - 1];
            if (std::abs(piv) < tiny) piv = tiny;
            c[i] = i + 1 < n ? op.off[i] / piv : 0.0;
            d[i] = (phi[i] - op.off[i - 1] * d[i - 1]) / piv;
        }
        y[n - 1] = d[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::abs(v));
        for (std::size_t i = 0; i < n; ++i) phi[i] = y[i] / norm;
    }
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = phi[i] / std::sqrt(op.volume[i]);
    return psi;
}

// beta^2 - k^2 n_cl^2 as a gradient-form Rayleigh quotient (no large cancellations).
inline double rayleigh_excess(const Operator& op, const std::vector<double>& psi) {
    double num = 0.0, den = 0.0;
    const std::size_t n = psi.size();
    for (std::size_t i = 0; i < n; ++i) {
        num += op.excess[i] * op.volume[i] * psi[i] * psi[i];
        den += op.volume[i] * psi[i] * psi[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dpsi = psi[i + 1] - psi[i];
        num -= op.coupling[i] * dpsi * dpsi;
    }
    num -= op.boundary * psi[n - 1] * psi[n - 1];
    return num / den;
}

}  // namespace detail

/// Fundamental scalar mode at `lambda_nm`. Throws NoGuidedMode below cutoff and
/// NotConverged when the exterior matching does not settle.
inline ModeSolution solve_lp01(const RadialIndexProfile& profile, double lambda_nm, const SolverNumerics& num = {}) {
    detail::require_finite(lambda_nm, "lambda_nm");
    const double n_cl = profile.cladding_index(lambda_nm);
    const double n_max = profile.max_index(lambda_nm);
    const double k = 2.0 * kPi / (lambda_nm * 1e-3);  // 1/um
    const auto grid = detail::build_grid(profile, num);
    const double r_edge = grid.faces.back();

    ModeSolution sol;
    sol.lambda_nm = lambda_nm;
    sol.cells = grid.centers.size();
    sol.domain_radius_um = r_edge;
    sol.min_step_um = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < grid.faces.size(); ++i)
        sol.min_step_um = std::min(sol.min_step_um, grid.faces[i + 1] - grid.faces[i]);

    const double cutoff_floor = 1e-10 * k * k * n_cl * n_cl;
    auto no_mode = [&] {
        return Error(ErrorCode::NoGuidedMode,
                     "no guided LP01 mode at " + format_double(lambda_nm) + " nm (profile at or below cutoff)");
    };

    double robin = 0.0;
    double excess = 0.0;
    bool settled = false;
    int it = 0;
    for (; it < num.max_bc_iterations; ++it) {
        const auto op = detail::assemble(grid, k, n_cl, robin);
        const double sigma = detail::largest_eigenvalue_bisect(op);
        if (sigma <= cutoff_floor) throw no_mode();
        const auto psi = detail::inverse_iteration(op, sigma);
        const double next = detail::rayleigh_excess(op, psi);
        if (!(next > 0.0)) throw no_mode();
        const bool done = it > 0 && std::abs(next - excess) <= num.bc_tolerance * (k * k * n_cl * n_cl);
        excess = next;
        if (done) {
            settled = true;
            break;
        }
        const double gamma = std::sqrt(excess);
        robin = gamma * detail::bessel_k_ratio(gamma * r_edge);
    }
    sol.bc_iterations = it + 1;
    sol.n_eff = std::sqrt(n_cl * n_cl + excess / (k * k));
    sol.converged = settled && sol.n_eff > n_cl && sol.n_eff < n_max;
    if (!sol.converged)
        throw Error(ErrorCode::NotConverged, "LP01 solve did not converge at " + format_double(lambda_nm) + " nm");
    return sol;
}

inline constexpr double kDefaultStencilStepNm = 2.0;
inline constexpr double kMinStencilStepNm = 0.05;

namespace detail {

struct StencilDerivatives {
    double n = 0, d1 = 0, d2 = 0, d3 = 0;  // n_eff and its wavelength derivatives (per nm)
};

inline StencilDerivatives stencil_derivatives(const RadialIndexProfile& p, double lambda_nm, double step_nm,
                                              const SolverNumerics& num) {
    require_finite(step_nm, "stencil step");
    require(step_nm >= kMinStencilStepNm, ErrorCode::InvalidArgument,
            "stencil step " + format_double(step_nm) + " nm below the " + format_double(kMinStencilStepNm) +
                " nm noise floor guard");
    std::array<double, 5> n{};
    parallel_for(5, num.threads, [&](std::size_t i) {
        n[i] = solve_lp01(p, lambda_nm + (static_cast<double>(i) - 2.0) * step_nm, num).n_eff;
    });
    const double h = step_nm;
    StencilDerivatives s;
    s.n = n[2];
    s.d1 = (n[0] - 8.0 * n[1] + 8.0 * n[3] - n[4]) / (12.0 * h);
    s.d2 = (-n[0] + 16.0 * n[1] - 30.0 * n[2] + 16.0 * n[3] - n[4]) / (12.0 * h * h);
    s.d3 = (-n[0] + 2.0 * n[1] - 2.0 * n[3] + n[4]) / (2.0 * h * h * h);
    return s;
}

}  // namespace detail

/// Group delay per km (ps/km) at one wavelength, n_g = n_eff - lambda dn_eff/dlambda.
inline double group_delay_per_km(const RadialIndexProfile& p, double lambda_nm,
                                 double step_nm = kDefaultStencilStepNm, const SolverNumerics& num = {}) {
    const auto s = detail::stencil_derivatives(p, lambda_nm, step_nm, num);
    return group_delay_ps_per_km(s.n - lambda_nm * s.d1);
}

/// Anchor delay, dispersion and slope of a profile at `lambda0_nm` from a 5-point
/// wavelength stencil. The stencil must fit inside [band_min_nm, band_max_nm].
inline CoreDispersion dispersion_from_profile(const RadialIndexProfile& p, double lambda0_nm, double band_min_nm,
                                              double band_max_nm, double step_nm = kDefaultStencilStepNm,
                                              const SolverNumerics& num = {}) {
    detail::require_finite(lambda0_nm, "lambda0_nm");
    detail::require(band_min_nm <= lambda0_nm - 2.0 * step_nm && lambda0_nm + 2.0 * step_nm <= band_max_nm,
                    ErrorCode::InvalidArgument, "wavelength stencil does not fit inside the band");
    const auto s = detail::stencil_derivatives(p, lambda0_nm, step_nm, num);
    const double per_km = group_delay_ps_per_km(1.0);
    CoreDispersion out;
    out.relative = false;
    out.tau0_ps_per_km = per_km * (s.n - lambda0_nm * s.d1);
    out.d_ps_per_km_nm = per_km * (-lambda0_nm * s.d2);
    out.s_ps_per_km_nm2 = per_km * (-s.d2 - lambda0_nm * s.d3);
    return out;
}

}  // namespace mcf
