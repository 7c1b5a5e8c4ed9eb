#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "bz/errors.hpp"
#include "bz/io.hpp"

namespace bz::detail {

using nlohmann::json;

inline std::size_t line_of(const std::string& text, std::size_t byte) {
    const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
    return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

inline json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source, line_of(text, e.byte), e.what());
    }
}

inline void escape_into(std::string& out, const std::string& s) {
    out += json(s).dump();
}

// nlohmann prints the shortest round-trip form; reports use a fixed 17 digits.
inline void dump_into(std::string& out, const json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                escape_into(out, it.key());
                out += indent < 0 ? ":" : ": ";
                dump_into(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of numbers stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_number(); });
            out += '[';
            bool first = true;
            for (const json& e : j) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                dump_into(out, e, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

inline std::string dump_json(const json& j) {
    std::string out;
    dump_into(out, j, 2, 0);
    out += '\n';
    return out;
}

template <typename T>
T field(const json& j, const char* key, const std::string& source) {
    if (!j.contains(key)) throw InputError(source + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(source + ": field '" + key + "': " + e.what());
    }
}

}  // namespace bz::detail
