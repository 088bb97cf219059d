#pragma once

// Dense matrix files (Matrix Market array format or plain CSV) and JSON
// block manifests.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "subsel/error.hpp"
#include "subsel/linalg.hpp"
#include "subsel/problem.hpp"

namespace subsel::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::string where(const std::string& path, std::size_t line, std::size_t col) {
    return path + ":" + std::to_string(line) + ":" + std::to_string(col);
}

/// Parses a whole token as a finite double.
inline bool parse_double(std::string_view token, double& out) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return false;
    }
    const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
    return res.ec == std::errc() && res.ptr == token.data() + token.size() && std::isfinite(out);
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct Token {
    std::string_view text;
    std::size_t line;
    std::size_t col;
};

/// Whitespace-separated tokens of one line, with 1-based columns.
inline void tokenize(std::string_view line, std::size_t lineno, std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        if (i > start) {
            out.push_back({line.substr(start, i - start), lineno, start + 1});
        }
    }
}

inline Matrix parse_matrix_market(const std::string& path, const std::vector<std::string>& lines) {
    std::vector<Token> header;
    tokenize(lines[0], 1, header);
    if (header.size() != 5 || lower(header[1].text) != "matrix") {
        throw Error(ErrorKind::ParseError, where(path, 1, 1) + ": malformed Matrix Market header");
    }
    if (lower(header[2].text) != "array") {
        throw Error(ErrorKind::ParseError, where(path, 1, header[2].col) + ": only the dense 'array' format is supported");
    }
    if (lower(header[3].text) != "real" && lower(header[3].text) != "integer") {
        throw Error(ErrorKind::ParseError, where(path, 1, header[3].col) + ": only real matrices are supported");
    }
    const std::string symmetry = lower(header[4].text);
    if (symmetry != "general" && symmetry != "symmetric") {
        throw Error(ErrorKind::ParseError, where(path, 1, header[4].col) + ": unsupported symmetry '" + symmetry + "'");
    }

    std::vector<Token> tokens;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto t = trim(lines[i]);
        if (t.empty() || t.front() == '%') {
            continue;
        }
        tokenize(lines[i], i + 1, tokens);
    }
    if (tokens.size() < 2) {
        throw Error(ErrorKind::ParseError, where(path, lines.size(), 1) + ": missing size line");
    }
    long rows = 0;
    long cols = 0;
    auto parse_size = [&](const Token& t, long& v) {
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size() || v < 1) {
            throw Error(ErrorKind::ParseError, where(path, t.line, t.col) + ": invalid dimension '" + std::string(t.text) + "'");
        }
    };
    parse_size(tokens[0], rows);
    parse_size(tokens[1], cols);
    if (tokens[0].line != tokens[1].line) {
        throw Error(ErrorKind::ParseError, where(path, tokens[1].line, tokens[1].col) + ": size line must hold rows and columns");
    }
    if (symmetry == "symmetric" && rows != cols) {
        throw Error(ErrorKind::ParseError, where(path, tokens[0].line, 1) + ": symmetric matrix must be square");
    }
    const std::size_t expected =
        symmetry == "symmetric" ? static_cast<std::size_t>(rows * (rows + 1) / 2) : static_cast<std::size_t>(rows * cols);
    const std::size_t have = tokens.size() - 2;
    if (have != expected) {
        const Token& at = have > expected ? tokens[2 + expected] : tokens.back();
        throw Error(ErrorKind::ParseError, where(path, at.line, at.col) + ": expected " + std::to_string(expected) +
                                               " entries, found " + std::to_string(have));
    }

    Matrix m(rows, cols);
    std::size_t t = 2;
    // Column-major; the symmetric variant lists the lower triangle.
    for (long j = 0; j < cols; ++j) {
        for (long i = (symmetry == "symmetric" ? j : 0); i < rows; ++i, ++t) {
            double v = 0.0;
            if (!parse_double(tokens[t].text, v)) {
                throw Error(ErrorKind::ParseError, where(path, tokens[t].line, tokens[t].col) + ": invalid number '" +
                                                       std::string(tokens[t].text) + "'");
            }
            m(i, j) = v;
            if (symmetry == "symmetric") {
                m(j, i) = v;
            }
        }
    }
    return m;
}

inline Matrix parse_csv(const std::string& path, const std::vector<std::string>& lines) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t width_line = 0;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string_view line = lines[li];
        if (trim(line).empty()) {
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view raw = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            const std::string_view cell = trim(raw);
            double v = 0.0;
            if (!parse_double(cell, v)) {
                throw Error(ErrorKind::ParseError, where(path, li + 1, start + 1) + ": invalid number '" + std::string(cell) +
                                                       "' in field " + std::to_string(row.size() + 1));
            }
            row.push_back(v);
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (rows.empty()) {
            width = row.size();
            width_line = li + 1;
        } else if (row.size() != width) {
            throw Error(ErrorKind::ParseError, where(path, li + 1, 1) + ": ragged row with " + std::to_string(row.size()) +
                                                   " fields, expected " + std::to_string(width) + " (from line " +
                                                   std::to_string(width_line) + ")");
        }
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return m;
}

} // namespace detail

/// Reads a dense real matrix from a Matrix Market array file (detected by
/// its %%MatrixMarket banner) or from CSV with one matrix row per line.
inline Matrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(std::move(line));
    }
    std::size_t first = 0;
    while (first < lines.size() && detail::trim(lines[first]).empty()) {
        ++first;
    }
    if (first == lines.size()) {
        throw Error(ErrorKind::EmptyFile, "'" + path + "' contains no data");
    }
    if (detail::trim(lines[first]).starts_with("%%MatrixMarket")) {
        if (first != 0) {
            throw Error(ErrorKind::ParseError, detail::where(path, first + 1, 1) + ": banner must be the first line");
        }
        return detail::parse_matrix_market(path, lines);
    }
    return detail::parse_csv(path, lines);
}

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    }
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out << (j ? "," : "") << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
    }
}

inline void write_matrix_market(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
    }
    out << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            out << format_double(m(i, j)) << '\n';
        }
    }
    if (!out) {
        throw Error(ErrorKind::IoError, "write to '" + path + "' failed");
    }
}

/// Loads a block manifest:
///   {"n": int, "fixed": {"file", "form"} | null,
///    "candidates": [{"file", "form", "label"?}], "total": {"file"}?}
/// File paths are relative to the manifest. Throws ValidationFailed when
/// the blocks do not form a valid problem.
inline BlockProblem parse_block_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open manifest '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    auto require = [&](bool cond, const std::string& what) {
        if (!cond) {
            throw Error(ErrorKind::ParseError, path + ": " + what);
        }
    };
    require(doc.is_object(), "manifest must be a JSON object");
    require(doc.contains("n") && doc["n"].is_number_integer() && doc["n"].get<long>() >= 1, "'n' must be a positive integer");
    require(doc.contains("candidates") && doc["candidates"].is_array(), "'candidates' must be an array");
    const auto n = static_cast<Index>(doc["n"].get<long>());

    ValidationSummary construction;
    auto load_block = [&](const nlohmann::json& entry, const std::string& name) -> std::optional<PsdBlock> {
        require(entry.is_object() && entry.contains("file") && entry["file"].is_string(), name + " needs a 'file' string");
        const std::string form = entry.value("form", std::string("explicit"));
        require(form == "explicit" || form == "factor", name + " has unknown form '" + form + "'");
        const std::string label = entry.contains("label") && entry["label"].is_string() ? entry["label"].get<std::string>() : "";
        const Matrix m = parse_matrix_file((base / entry["file"].get<std::string>()).string());
        if (form == "factor") {
            return PsdBlock::factor_form(m, label);
        }
        if (m.rows() != m.cols()) {
            construction.add("dimension", false, name + " is " + subsel::detail::shape(m) + ", expected square");
            return std::nullopt;
        }
        try {
            return PsdBlock::explicit_form(SymMatrix(m), label);
        } catch (const Error& e) {
            construction.add(e.kind() == ErrorKind::NotSymmetric ? "symmetry" : "dimension", false, name + ": " + e.what());
            return std::nullopt;
        }
    };

    std::optional<PsdBlock> fixed;
    if (doc.contains("fixed") && !doc["fixed"].is_null()) {
        fixed = load_block(doc["fixed"], "fixed block");
    }
    std::vector<PsdBlock> candidates;
    std::size_t idx = 0;
    for (const auto& entry : doc["candidates"]) {
        ++idx;
        if (auto b = load_block(entry, "candidate " + std::to_string(idx))) {
            candidates.push_back(std::move(*b));
        }
    }
    if (!construction.ok()) {
        throw Error(ErrorKind::ValidationFailed, construction.describe());
    }

    BlockProblem problem = fixed ? BlockProblem(n, std::move(*fixed), std::move(candidates)) : BlockProblem(n, std::move(candidates));
    if (doc.contains("total") && !doc["total"].is_null()) {
        require(doc["total"].is_object() && doc["total"].contains("file"), "'total' needs a 'file' string");
        problem.supplied_total = parse_matrix_file((base / doc["total"]["file"].get<std::string>()).string());
    }
    const ValidationSummary summary = validate_block_problem(problem);
    if (!summary.ok()) {
        throw Error(ErrorKind::ValidationFailed, summary.describe());
    }
    return problem;
}

} // namespace subsel::io
