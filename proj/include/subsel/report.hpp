#pragma once

// JSON serialization of selection reports. Floating-point values are
// written with 17 significant digits so that re-parsing them is exact.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "subsel/error.hpp"
#include "subsel/io.hpp"
#include "subsel/oracle.hpp"
#include "subsel/selection.hpp"

namespace subsel {

inline constexpr const char* tool_version = "subsel 0.1.0";

using Json = nlohmann::ordered_json;

namespace detail {

inline void write_json_value(std::ostream& os, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            os << (first ? "" : ",\n") << pad << Json(it.key()).dump() << ": ";
            write_json_value(os, it.value(), indent, depth + 1);
            first = false;
        }
        os << '\n' << close_pad << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        if (flat) {
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                os << (first ? "" : ", ");
                write_json_value(os, e, indent, depth + 1);
                first = false;
            }
            os << ']';
            return;
        }
        os << "[\n";
        bool first = true;
        for (const auto& e : j) {
            os << (first ? "" : ",\n") << pad;
            write_json_value(os, e, indent, depth + 1);
            first = false;
        }
        os << '\n' << close_pad << ']';
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            os << "null";
        } else {
            os << io::format_double(v);
        }
        return;
    }
    default:
        os << j.dump();
        return;
    }
}

} // namespace detail

/// Pretty-printed JSON with two-space indentation and %.17g floats.
inline std::string to_json_text(const Json& j) {
    std::ostringstream os;
    detail::write_json_value(os, j, 2, 0);
    os << '\n';
    return os.str();
}

inline Json report_to_json(const SelectionReport& report) {
    Json j;
    Json chosen = Json::array();
    for (Index i : report.chosen) {
        chosen.push_back(i + 1);
    }
    j["chosen"] = chosen;
    j["achieved_trace"] = report.achievedTrace;
    j["bound"] = report.bound;
    j["bound_name"] = std::string(to_string(report.boundName));
    j["k"] = report.k;
    j["n"] = report.n;
    j["m"] = report.m;
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        Json step;
        step["removed"] = s.removedIndex + 1;
        step["alpha"] = s.alpha;
        step["margin"] = s.margin;
        step["trace_after"] = s.traceAfter;
        steps.push_back(step);
    }
    j["steps"] = steps;
    j["refactorizations"] = report.refactorizations;
    j["tool_version"] = tool_version;
    return j;
}

inline Json oracle_to_json(const OracleResult& r) {
    Json j;
    Json best = Json::array();
    for (Index i : r.bestSubset) {
        best.push_back(i + 1);
    }
    j["best_subset"] = best;
    j["best_value"] = r.bestValue;
    j["feasible_count"] = r.feasibleCount;
    j["enumerated"] = r.enumerated;
    return j;
}

/// Writes the report to `output_path`, or to standard output when empty.
inline void emit_json(const Json& j, const std::optional<std::string>& output_path) {
    const std::string text = to_json_text(j);
    if (!output_path || output_path->empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) {
            throw Error(ErrorKind::IoError, "write to standard output failed");
        }
        return;
    }
    std::ofstream out(*output_path);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open '" + *output_path + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error(ErrorKind::IoError, "write to '" + *output_path + "' failed");
    }
}

inline void emit_report(const SelectionReport& report, const std::optional<std::string>& output_path) {
    emit_json(report_to_json(report), output_path);
}

} // namespace subsel
