#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orgsel/batching.hpp"
#include "orgsel/distributions.hpp"
#include "orgsel/errors.hpp"

// Key-value experiment files.
//
//   # comment
//   key = value
//   [part label]
//   key = value      # overrides the top-level key for this part only
//
// List values are comma separated (commas inside parentheses do not split),
// and numeric lists accept inclusive ranges "start:stop:step" and fractions
// such as "10/3".

namespace orgsel {

using KeyValues = std::map<std::string, std::string, std::less<>>;

struct ConfigSection {
    std::string label;
    KeyValues values;
};

struct ConfigDocument {
    KeyValues top;
    std::vector<ConfigSection> parts;

    /// Keys of `other` replace ours; its parts, when it has any, replace ours wholesale.
    void overlay(const ConfigDocument& other) {
        for (const auto& [k, v] : other.top) top[k] = v;
        if (!other.parts.empty()) parts = other.parts;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline ConfigDocument parse_config(std::string_view text, std::string_view source = "<config>") {
    ConfigDocument doc;
    KeyValues* current = &doc.top;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& why) {
            throw ConfigurationError(std::string(source) + ":" + std::to_string(line_no) + ": " + why);
        };
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            std::string_view inner = detail::trim(line.substr(1, line.size() - 2));
            if (inner.substr(0, 4) != "part") fail("only [part <label>] sections are supported");
            const std::string label(detail::trim(inner.substr(4)));
            if (label.empty()) fail("a part needs a label");
            doc.parts.push_back({label, {}});
            current = &doc.parts.back().values;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        const std::string key(detail::trim(line.substr(0, eq)));
        if (key.empty()) fail("empty key");
        (*current)[key] = std::string(detail::trim(line.substr(eq + 1)));
    }
    return doc;
}

inline ConfigDocument load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

/// Comma-separated items, ignoring commas nested in parentheses.
inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    int depth = 0;
    std::string current;
    for (char c : value) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            items.emplace_back(detail::trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (!detail::trim(current).empty() || !items.empty()) items.emplace_back(detail::trim(current));
    std::erase_if(items, [](const std::string& s) { return s.empty(); });
    return items;
}

/// Number with optional "a/b" fraction form.
inline double parse_scalar(std::string_view text) {
    text = detail::trim(text);
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const double den = detail::parse_number(text.substr(slash + 1));
        if (den == 0.0) throw ConfigurationError("division by zero in '" + std::string(text) + "'");
        return detail::parse_number(text.substr(0, slash)) / den;
    }
    return detail::parse_number(text);
}

inline std::vector<double> parse_real_list(std::string_view value) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        std::vector<std::string_view> fields;
        std::string_view rest = item;
        while (true) {
            const auto colon = rest.find(':');
            fields.push_back(rest.substr(0, colon));
            if (colon == std::string_view::npos) break;
            rest.remove_prefix(colon + 1);
        }
        if (fields.size() == 1) {
            out.push_back(parse_scalar(fields[0]));
        } else if (fields.size() == 3) {
            const double start = parse_scalar(fields[0]);
            const double stop = parse_scalar(fields[1]);
            const double step = parse_scalar(fields[2]);
            if (!(step > 0.0)) throw ConfigurationError("range step must be positive in '" + item + "'");
            const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
            for (std::size_t k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
        } else {
            throw ConfigurationError("expected value or start:stop:step, got '" + item + "'");
        }
    }
    return out;
}

inline std::vector<std::size_t> parse_count_list(std::string_view value) {
    std::vector<std::size_t> out;
    for (double v : parse_real_list(value)) {
        if (v < 0.0 || v != std::floor(v)) throw ConfigurationError("expected a non-negative integer, got " +
                                                                     detail::format_number(v));
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

inline bool parse_bool(std::string_view value) {
    value = detail::trim(value);
    if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
    if (value == "false" || value == "no" || value == "0" || value == "off") return false;
    throw ConfigurationError("expected a boolean, got '" + std::string(value) + "'");
}

/// "none" or "c/assignment/decision".
inline std::optional<BatchingSpec> parse_batching(std::string_view value) {
    value = detail::trim(value);
    if (value == "none" || value.empty()) return std::nullopt;
    std::vector<std::string> fields;
    std::string_view rest = value;
    while (true) {
        const auto slash = rest.find('/');
        fields.emplace_back(detail::trim(rest.substr(0, slash)));
        if (slash == std::string_view::npos) break;
        rest.remove_prefix(slash + 1);
    }
    if (fields.size() != 3) throw ConfigurationError("batching must look like 10/random/centralized");
    BatchingSpec spec;
    const double c = detail::parse_number(fields[0]);
    if (c < 1.0 || c != std::floor(c)) throw ConfigurationError("batch size must be a positive integer");
    spec.batch_size = static_cast<std::size_t>(c);
    if (fields[1] == "random") spec.assignment = BatchAssignment::random;
    else if (fields[1] == "expertise" || fields[1] == "expertise-matched") spec.assignment = BatchAssignment::expertise_matched;
    else throw ConfigurationError("unknown batch assignment '" + fields[1] + "'");
    if (fields[2] == "centralized") spec.decision = BatchDecision::centralized;
    else if (fields[2] == "decentralized") spec.decision = BatchDecision::decentralized;
    else throw ConfigurationError("unknown batch decision '" + fields[2] + "'");
    return spec;
}

}  // namespace orgsel
