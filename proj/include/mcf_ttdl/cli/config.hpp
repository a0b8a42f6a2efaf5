#pragma once

// Sectioned key-value configuration text:
//
//   # comment
//   [section]
//   key_unit = value
//   list_key = 1, 2, 3
//
// Keys carry their unit as a suffix (pitch_um, length_km, lambda0_nm, ...).
// One section level only; duplicate sections and duplicate keys are errors.

#include "mcf_ttdl/error.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcf::cli {

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, Entry> entries;
};

struct Document {
    std::vector<Section> sections;

    const Section* find(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void parse_error(int line, const std::string& msg) {
    throw Error(ErrorCode::Parse, (line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + msg);
}

}  // namespace detail

inline Document parse_document(std::string_view text) {
    Document doc;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const auto line = detail::trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') detail::parse_error(line_no, "malformed section header");
            const std::string name(detail::trim(line.substr(1, line.size() - 2)));
            if (name.empty()) detail::parse_error(line_no, "empty section name");
            if (const auto* prev = doc.find(name))
                detail::parse_error(line_no, "duplicate section [" + name + "] (first at line " +
                                                 std::to_string(prev->line) + ")");
            doc.sections.push_back({name, line_no, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) detail::parse_error(line_no, "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) detail::parse_error(line_no, "empty key");
        if (doc.sections.empty()) detail::parse_error(line_no, "key '" + key + "' appears before any section");
        auto& sec = doc.sections.back();
        if (sec.entries.count(key))
            detail::parse_error(line_no, "duplicate key '" + key + "' in [" + sec.name + "]");
        sec.entries.emplace(key, Entry{value, line_no});
    }
    return doc;
}

enum class ValueType { number, integer, number_list, integer_list, text, boolean };

struct KeySpec {
    std::string name;
    ValueType type = ValueType::number;
    bool required = false;
};

struct SectionSpec {
    std::string name;
    bool required = false;
    std::vector<KeySpec> keys;
};

namespace detail {

// Unit suffixes recognized in key names, longest first so stripping is greedy.
inline const std::vector<std::string>& unit_suffixes() {
    static const std::vector<std::string> s{"_ps_km_nm2", "_ps_km_nm", "_ps_km", "_ghz", "_pct", "_um", "_nm",
                                            "_mm",        "_km",       "_ps"};
    return s;
}

inline std::string strip_unit(const std::string& key) {
    for (const auto& u : unit_suffixes())
        if (key.size() > u.size() && key.compare(key.size() - u.size(), u.size(), u) == 0)
            return key.substr(0, key.size() - u.size());
    return key;
}

inline double parse_number(const Entry& e, const std::string& key) {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    if (!e.value.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc{} || ptr != end || e.value.empty())
        parse_error(e.line, "key '" + key + "': expected a number, got '" + e.value + "'");
    return v;
}

inline long long parse_integer(const Entry& e, const std::string& key) {
    long long v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc{} || ptr != end || e.value.empty())
        parse_error(e.line, "key '" + key + "': expected an integer, got '" + e.value + "'");
    return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto c = s.find(',', pos);
        out.emplace_back(trim(std::string_view(s).substr(pos, c == std::string::npos ? std::string::npos : c - pos)));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

}  // namespace detail

/// Rejects unknown sections/keys, unit-suffix mismatches, missing required keys and bad values.
inline void validate_document(const Document& doc, const std::vector<SectionSpec>& schema) {
    for (const auto& spec : schema)
        if (spec.required && !doc.find(spec.name))
            detail::parse_error(0, "missing required section [" + spec.name + "]");

    for (const auto& sec : doc.sections) {
        const auto it = std::find_if(schema.begin(), schema.end(), [&](const auto& s) { return s.name == sec.name; });
        if (it == schema.end()) detail::parse_error(sec.line, "unknown section [" + sec.name + "]");
        for (const auto& [key, entry] : sec.entries) {
            const auto k = std::find_if(it->keys.begin(), it->keys.end(), [&](const auto& ks) { return ks.name == key; });
            if (k == it->keys.end()) {
                const auto base = detail::strip_unit(key);
                for (const auto& ks : it->keys)
                    if (ks.name != key && detail::strip_unit(ks.name) == base)
                        detail::parse_error(entry.line, "unit-suffix mismatch: key '" + key + "' in [" + sec.name +
                                                            "] must be written '" + ks.name + "'");
                detail::parse_error(entry.line, "unknown key '" + key + "' in [" + sec.name + "]");
            }
            switch (k->type) {
                case ValueType::number: detail::parse_number(entry, key); break;
                case ValueType::integer: detail::parse_integer(entry, key); break;
                case ValueType::number_list:
                    for (const auto& item : detail::split_list(entry.value)) detail::parse_number({item, entry.line}, key);
                    break;
                case ValueType::integer_list:
                    for (const auto& item : detail::split_list(entry.value)) detail::parse_integer({item, entry.line}, key);
                    break;
                case ValueType::boolean:
                    if (entry.value != "true" && entry.value != "false")
                        detail::parse_error(entry.line, "key '" + key + "': expected true or false");
                    break;
                case ValueType::text:
                    if (entry.value.empty()) detail::parse_error(entry.line, "key '" + key + "': empty value");
                    break;
            }
        }
        for (const auto& ks : it->keys)
            if (ks.required && !sec.entries.count(ks.name))
                detail::parse_error(sec.line, "missing required key '" + ks.name + "' in [" + sec.name + "]");
    }
}

/// Typed read access to a validated document.
class Reader {
public:
    explicit Reader(const Document& doc) : doc_(doc) {}

    bool has(std::string_view section) const { return doc_.find(section) != nullptr; }
    bool has(std::string_view section, const std::string& key) const {
        const auto* s = doc_.find(section);
        return s && s->entries.count(key);
    }

    std::optional<double> number(std::string_view section, const std::string& key) const {
        if (const auto* e = entry(section, key)) return detail::parse_number(*e, key);
        return std::nullopt;
    }
    double number(std::string_view section, const std::string& key, double fallback) const {
        return number(section, key).value_or(fallback);
    }
    std::optional<long long> integer(std::string_view section, const std::string& key) const {
        if (const auto* e = entry(section, key)) return detail::parse_integer(*e, key);
        return std::nullopt;
    }
    std::optional<std::vector<double>> numbers(std::string_view section, const std::string& key) const {
        const auto* e = entry(section, key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        for (const auto& item : detail::split_list(e->value)) out.push_back(detail::parse_number({item, e->line}, key));
        return out;
    }
    std::optional<std::vector<long long>> integers(std::string_view section, const std::string& key) const {
        const auto* e = entry(section, key);
        if (!e) return std::nullopt;
        std::vector<long long> out;
        for (const auto& item : detail::split_list(e->value)) out.push_back(detail::parse_integer({item, e->line}, key));
        return out;
    }
    std::optional<std::string> text(std::string_view section, const std::string& key) const {
        if (const auto* e = entry(section, key)) return e->value;
        return std::nullopt;
    }
    std::optional<bool> boolean(std::string_view section, const std::string& key) const {
        if (const auto* e = entry(section, key)) return e->value == "true";
        return std::nullopt;
    }
    int line(std::string_view section, const std::string& key) const {
        const auto* e = entry(section, key);
        return e ? e->line : 0;
    }

private:
    const Entry* entry(std::string_view section, const std::string& key) const {
        const auto* s = doc_.find(section);
        if (!s) return nullptr;
        const auto it = s->entries.find(key);
        return it == s->entries.end() ? nullptr : &it->second;
    }
    const Document& doc_;
};

}  // namespace mcf::cli
