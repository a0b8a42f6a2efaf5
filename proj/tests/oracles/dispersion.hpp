#pragma once

// Dispersion oracles built only from closed forms and the analytic step-index root:
//  - fused-silica Sellmeier index and its second wavelength derivative (analytic)
//  - step-index D from densely sampled analytic n_eff and a least-squares polynomial fit

#include "step_index.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

// Malitson fused-silica coefficients (wavelength in um).
inline constexpr std::array<long double, 3> kSellB{0.6961663L, 0.4079426L, 0.8974794L};
inline constexpr std::array<long double, 3> kSellL{0.0684043L, 0.1162414L, 9.896161L};

inline constexpr long double kC = 299792458.0L;
// ps/km per unit of group index
inline constexpr long double kPsPerKm = 1e15L / kC;

struct SellmeierDerivs {
    long double n, d1, d2;  // n, dn/dlambda, d2n/dlambda2 with lambda in nm
};

inline SellmeierDerivs silica(long double lambda_nm) {
    const long double l = lambda_nm * 1e-3L;
    const long double u = l * l;
    long double N = 1.0L, Nu = 0.0L, Nuu = 0.0L;
    for (int i = 0; i < 3; ++i) {
        const long double c = kSellL[i] * kSellL[i];
        N += kSellB[i] * u / (u - c);
        Nu += -kSellB[i] * c / ((u - c) * (u - c));
        Nuu += 2.0L * kSellB[i] * c / ((u - c) * (u - c) * (u - c));
    }
    const long double dN = 2.0L * l * Nu;                     // per um
    const long double d2N = 2.0L * Nu + 4.0L * u * Nuu;        // per um^2
    const long double n = std::sqrt(N);
    const long double n1 = dN / (2.0L * n);
    const long double n2 = (d2N - 2.0L * n1 * n1) / (2.0L * n);
    return {n, n1 * 1e-3L, n2 * 1e-6L};
}

/// Pure material dispersion of fused silica, ps/(km nm).
inline double material_dispersion(double lambda_nm) {
    return static_cast<double>(kPsPerKm * (-static_cast<long double>(lambda_nm) * silica(lambda_nm).d2));
}

/// Least-squares polynomial fit p(x) = sum c_k x^k (normal equations, long double).
inline std::vector<long double> polyfit(const std::vector<long double>& x, const std::vector<long double>& y,
                                        int degree) {
    const int m = degree + 1;
    std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<long double> p(2 * m, 1.0L);
        for (int k = 1; k < 2 * m; ++k) p[k] = p[k - 1] * x[i];
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) a[r][c] += p[r + c];
            a[r][m] += p[r] * y[i];
        }
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            const long double f = a[r][c] / a[c][c];
            for (int k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<long double> coef(m);
    for (int r = 0; r < m; ++r) coef[r] = a[r][m] / a[r][r];
    return coef;
}

/// Step-index D at lambda0 from the analytic n_eff sampled on +-half_span_nm and fitted by a
/// degree-6 polynomial in the scaled offset. Core index n_cl (1 + delta).
inline double step_index_dispersion(double a_um, double delta_pct, double lambda0_nm, double half_span_nm = 20.0,
                                    int samples = 81) {
    std::vector<long double> x, y;
    for (int i = 0; i < samples; ++i) {
        const double t = -1.0 + 2.0 * i / (samples - 1.0);
        const double lam = lambda0_nm + t * half_span_nm;
        const double n2 = static_cast<double>(silica(lam).n);
        const double n1 = n2 * (1.0 + delta_pct / 100.0);
        x.push_back(t);
        y.push_back(step_index_neff(n1, n2, a_um, lam));
    }
    const auto c = polyfit(x, y, 6);
    // d2n/dlambda2 at t = 0 is 2 c2 / h^2
    const long double h = half_span_nm;
    const long double n_dd = 2.0L * c[2] / (h * h);
    return static_cast<double>(kPsPerKm * (-static_cast<long double>(lambda0_nm) * n_dd));
}

}  // namespace oracle
