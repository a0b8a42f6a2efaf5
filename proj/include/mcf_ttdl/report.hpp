#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mcf {

/// One violated rule. `margin` is signed: negative means by how much the rule was missed.
struct Violation {
    std::string rule;
    std::string detail;
    double margin = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    // Named diagnostics (e.g. clearance margins) reported regardless of outcome.
    std::vector<std::pair<std::string, double>> metrics;

    bool pass() const { return violations.empty(); }

    bool violates(const std::string& rule) const {
        for (const auto& v : violations)
            if (v.rule == rule) return true;
        return false;
    }

    std::optional<double> metric(const std::string& name) const {
        for (const auto& [k, v] : metrics)
            if (k == name) return v;
        return std::nullopt;
    }
};

}  // namespace mcf
