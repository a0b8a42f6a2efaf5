#pragma once

#include "mcf_ttdl/error.hpp"
#include "mcf_ttdl/format.hpp"

#include <array>
#include <cmath>
#include <string>

namespace mcf {

inline constexpr double kMaterialWindowMinNm = 1200.0;
inline constexpr double kMaterialWindowMaxNm = 1700.0;

/// Three-term Sellmeier model, n^2 = 1 + sum B_i l^2 / (l^2 - L_i^2), wavelengths in um.
struct MaterialModel {
    std::string name;
    std::array<double, 3> amplitudes{};
    std::array<double, 3> resonances_um{};

    /// Fused silica at 20 C, I. H. Malitson, J. Opt. Soc. Am. 55, 1205 (1965).
    static MaterialModel fused_silica() {
        return {"fused_silica_malitson1965",
                {0.6961663, 0.4079426, 0.8974794},
                {0.0684043, 0.1162414, 9.896161}};
    }
};

inline double material_index(const MaterialModel& m, double lambda_nm) {
    detail::require_finite(lambda_nm, "lambda_nm");
    detail::require(lambda_nm >= kMaterialWindowMinNm && lambda_nm <= kMaterialWindowMaxNm,
                    ErrorCode::InvalidArgument,
                    "wavelength " + format_double(lambda_nm) + " nm outside material validity window 1200-1700 nm");
    const double l2 = (lambda_nm * 1e-3) * (lambda_nm * 1e-3);
    double n2 = 1.0;
    for (int i = 0; i < 3; ++i) {
        const double r = m.resonances_um[i];
        n2 += m.amplitudes[i] * l2 / (l2 - r * r);
    }
    return std::sqrt(n2);
}

}  // namespace mcf
