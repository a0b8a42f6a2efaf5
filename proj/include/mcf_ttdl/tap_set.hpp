#pragma once

#include "mcf_ttdl/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mcf {

struct Tap {
    double delay_ps = 0.0;
    double amplitude = 1.0;
    std::string label;
};

/// Ordered (delay, amplitude) samples. Delays strictly increase; amplitudes are >= 0.
class TapSet {
public:
    TapSet() = default;

    /// Sorts by delay and validates. Throws DegenerateTaps on coincident delays.
    explicit TapSet(std::vector<Tap> taps, std::string label = {}) : taps_(std::move(taps)), label_(std::move(label)) {
        detail::require(!taps_.empty(), ErrorCode::InvalidArgument, "tap set needs at least one tap");
        for (const auto& t : taps_) {
            detail::require_finite(t.delay_ps, "tap delay");
            detail::require_finite(t.amplitude, "tap amplitude");
            detail::require(t.amplitude >= 0.0, ErrorCode::InvalidArgument, "tap amplitude must be >= 0");
        }
        std::stable_sort(taps_.begin(), taps_.end(),
                         [](const Tap& a, const Tap& b) { return a.delay_ps < b.delay_ps; });
        for (std::size_t k = 1; k < taps_.size(); ++k)
            detail::require(taps_[k].delay_ps > taps_[k - 1].delay_ps, ErrorCode::DegenerateTaps,
                            "tap delays must be strictly increasing (taps '" + taps_[k - 1].label + "' and '" +
                                taps_[k].label + "' coincide)");
    }

    static TapSet uniform(std::size_t n, double spacing_ps, double amplitude = 1.0, double offset_ps = 0.0) {
        std::vector<Tap> taps;
        for (std::size_t k = 0; k < n; ++k)
            taps.push_back({offset_ps + static_cast<double>(k) * spacing_ps, amplitude, "tap " + std::to_string(k)});
        return TapSet(std::move(taps), "uniform");
    }

    const std::vector<Tap>& taps() const { return taps_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return taps_.size(); }
    const Tap& operator[](std::size_t i) const { return taps_[i]; }

    std::vector<double> spacings_ps() const {
        std::vector<double> d;
        for (std::size_t k = 1; k < taps_.size(); ++k) d.push_back(taps_[k].delay_ps - taps_[k - 1].delay_ps);
        return d;
    }

    double mean_spacing_ps() const {
        detail::require(taps_.size() >= 2, ErrorCode::InvalidArgument, "spacing needs at least two taps");
        return (taps_.back().delay_ps - taps_.front().delay_ps) / static_cast<double>(taps_.size() - 1);
    }

    /// True when every adjacent spacing is within `rel_tol` of the mean spacing.
    bool is_uniform(double rel_tol) const {
        if (taps_.size() < 2) return false;
        const double mean = mean_spacing_ps();
        for (double d : spacings_ps())
            if (std::abs(d - mean) > rel_tol * std::abs(mean)) return false;
        return true;
    }

    double amplitude_sum() const {
        double s = 0.0;
        for (const auto& t : taps_) s += t.amplitude;
        return s;
    }

private:
    std::vector<Tap> taps_;
    std::string label_;
};

}  // namespace mcf
