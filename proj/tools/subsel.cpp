// Command-line front end for greedy trace-of-inverse subset selection.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
// 3 input parse failure, 4 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subsel/subsel.hpp"

namespace {

using namespace subsel;

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kParse = 3, kNumerical = 4 };

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ValidationFailed:
    case ErrorKind::KOutOfRange:
    case ErrorKind::InvalidArgument:
    case ErrorKind::RankDeficient:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotPsd:
    case ErrorKind::NotSymmetric:
    case ErrorKind::SingularMatrix:
        return kValidation;
    case ErrorKind::ParseError:
    case ErrorKind::EmptyFile:
        return kParse;
    case ErrorKind::CertificateViolated:
    case ErrorKind::CapacitanceSingular:
    case ErrorKind::NoCandidates:
        return kNumerical;
    case ErrorKind::TooLarge:
    case ErrorKind::Infeasible:
    case ErrorKind::IoError:
        return kUsage;
    }
    return kUsage;
}

struct RunConfig {
    std::string inputPath;
    std::string k = "min";
    std::string keep;
    std::string outputPath;
    std::uint64_t enumCap = default_enum_cap;
};

/// "min" or a non-negative integer.
std::optional<long> parse_k(const std::string& text) {
    if (text == "min") {
        return std::nullopt;
    }
    std::size_t used = 0;
    long k = -1;
    try {
        k = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || k < 0) {
        throw Error(ErrorKind::InvalidArgument, "--k must be a non-negative integer or 'min', got '" + text + "'");
    }
    return k;
}

/// Comma-separated 1-based indices, returned 0-based.
std::vector<Index> parse_keep(const std::string& text, Index m) {
    std::vector<Index> out;
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || v < 1 || v > m) {
            throw Error(ErrorKind::InvalidArgument, "--keep entry '" + item + "' is not a column index in [1, " + std::to_string(m) + "]");
        }
        out.push_back(static_cast<Index>(v - 1));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::optional<std::string> out_path(const RunConfig& cfg) {
    return cfg.outputPath.empty() ? std::nullopt : std::optional<std::string>(cfg.outputPath);
}

int select_columns(const RunConfig& cfg) {
    ColumnProblem cp;
    cp.u = io::parse_matrix_file(cfg.inputPath);
    cp.keep = parse_keep(cfg.keep, cp.u.cols());
    long k = 0;
    if (const auto explicit_k = parse_k(cfg.k)) {
        k = *explicit_k;
    } else if (cp.keep.empty()) {
        validate_column_problem(cp);
        k = static_cast<long>(cp.u.rows());
    } else {
        k = minimal_k(to_block_problem(cp).problem);
    }
    emit_report(run_column_selection(cp, k), out_path(cfg));
    return kOk;
}

int select_blocks(const RunConfig& cfg) {
    const BlockProblem problem = io::parse_block_manifest(cfg.inputPath);
    const auto explicit_k = parse_k(cfg.k);
    const long k = explicit_k ? *explicit_k : minimal_k(problem);
    emit_report(run_block_selection(problem, k), out_path(cfg));
    return kOk;
}

int oracle(const RunConfig& cfg) {
    const BlockProblem problem = io::parse_block_manifest(cfg.inputPath);
    const auto explicit_k = parse_k(cfg.k);
    const long k = explicit_k ? *explicit_k : minimal_k(problem);
    const OracleResult best = exhaustive_min_trace(problem, k, cfg.enumCap);
    const SelectionReport report = run_block_selection(problem, k);
    const VerificationSummary v = verify_report(problem, k, report, cfg.enumCap);

    Json j;
    j["k"] = k;
    j["n"] = problem.n;
    j["m"] = problem.m();
    j["oracle"] = oracle_to_json(best);
    Json greedy;
    Json chosen = Json::array();
    for (Index i : report.chosen) {
        chosen.push_back(i + 1);
    }
    greedy["chosen"] = chosen;
    greedy["achieved_trace"] = report.achievedTrace;
    greedy["bound"] = report.bound;
    greedy["bound_name"] = std::string(to_string(report.boundName));
    j["greedy"] = greedy;
    Json checks;
    checks["oracle_below_greedy"] = v.oracleBelow;
    checks["greedy_below_bound"] = v.boundAbove;
    checks["recomputed_trace_matches"] = v.recomputeMatch;
    checks["recomputed_trace"] = v.recomputedTrace;
    j["verification"] = checks;
    j["tool_version"] = tool_version;
    emit_json(j, out_path(cfg));
    return v.ok() ? kOk : kNumerical;
}

struct BoundArgs {
    long m = 0;
    long n = 0;
    std::optional<long> k;
    std::optional<long> r;
    std::optional<double> trAinv;
    std::optional<double> trAinvB;
    std::optional<double> trA2invB;
    std::string outputPath;
};

int bound(const BoundArgs& a) {
    Json inputs;
    inputs["m"] = a.m;
    inputs["n"] = a.n;
    double value = 0.0;
    BoundName name = BoundName::theorem1;
    if (a.r) {
        inputs["r"] = *a.r;
        name = BoundName::corollary3;
        value = bound_corollary3(a.m, a.n, *a.r);
    } else {
        if (!a.trAinv) {
            throw Error(ErrorKind::InvalidArgument, "--tr-ainv is required unless --r is given");
        }
        inputs["tr_ainv"] = *a.trAinv;
        const bool has_fixed = a.trAinvB || a.trA2invB;
        if (!has_fixed) {
            if (a.k && *a.k != a.n) {
                inputs["k"] = *a.k;
                name = BoundName::corollary6;
                value = bound_corollary6(a.m, a.n, *a.k, *a.trAinv);
            } else {
                inputs["k"] = a.n;
                value = bound_theorem1(a.m, a.n, *a.trAinv);
            }
        } else {
            TraceFunctionals tf{*a.trAinv, a.trAinvB.value_or(0.0), a.trA2invB.value_or(0.0)};
            const long k = a.k ? *a.k : admissible_min_k(a.n, tf.trAinvB);
            inputs["k"] = k;
            inputs["tr_ainvb"] = tf.trAinvB;
            inputs["tr_a2invb"] = tf.trA2invB;
            name = BoundName::theorem2;
            value = bound_theorem2(a.m, a.n, k, tf);
        }
    }
    Json j;
    j["bound"] = value;
    j["bound_name"] = std::string(to_string(name));
    j["inputs"] = inputs;
    emit_json(j, a.outputPath.empty() ? std::nullopt : std::optional<std::string>(a.outputPath));
    return kOk;
}

struct GenArgs {
    std::string kind;
    long n = 0;
    long m = 0;
    std::uint64_t seed = 0;
    long fixedRank = -1;
    std::string outDir;
};

int generate(const GenArgs& a) {
    if (a.n < 1 || a.m < 1) {
        throw Error(ErrorKind::InvalidArgument, "--n and --m must be positive");
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(a.outDir, ec);
    if (ec) {
        throw Error(ErrorKind::IoError, "cannot create '" + a.outDir + "': " + ec.message());
    }
    gen::Rng rng(a.seed);
    const fs::path dir(a.outDir);
    if (a.kind == "columns") {
        io::write_csv((dir / "U.csv").string(), gen::random_columns(a.n, a.m, rng));
        return kOk;
    }
    const long fixed_rank = a.fixedRank >= 0 ? a.fixedRank : static_cast<long>(gen::uniform_index(0, a.n, rng));
    const BlockProblem p = gen::random_block_problem(a.n, a.m, fixed_rank, rng);
    Json manifest;
    manifest["n"] = a.n;
    if (p.fixed_is_zero()) {
        manifest["fixed"] = nullptr;
    } else {
        io::write_csv((dir / "fixed.csv").string(), p.fixed.factor());
        manifest["fixed"] = Json{{"file", "fixed.csv"}, {"form", "factor"}};
    }
    Json cands = Json::array();
    for (std::size_t i = 0; i < p.candidates.size(); ++i) {
        const std::string file = "candidate_" + std::to_string(i + 1) + ".csv";
        io::write_csv((dir / file).string(), p.candidates[i].factor());
        cands.push_back(Json{{"file", file}, {"form", "factor"}, {"label", p.candidates[i].label()}});
    }
    manifest["candidates"] = cands;
    emit_json(manifest, (dir / "manifest.json").string());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy subset selection minimizing the trace of the inverse"};
    app.require_subcommand(1);

    RunConfig columns_cfg;
    auto* columns = app.add_subcommand("select-columns", "Select columns of an n x m matrix U");
    columns->add_option("--input", columns_cfg.inputPath, "Matrix file (CSV or Matrix Market array)")->required();
    columns->add_option("--keep", columns_cfg.keep, "Comma-separated 1-based columns that must be kept");
    columns->add_option("--k", columns_cfg.k, "Number of columns to pick besides --keep, or 'min'");
    columns->add_option("--out", columns_cfg.outputPath, "Report path (default: standard output)");

    RunConfig blocks_cfg;
    auto* blocks = app.add_subcommand("select-blocks", "Select PSD blocks listed in a JSON manifest");
    blocks->add_option("--manifest", blocks_cfg.inputPath, "Block manifest")->required();
    blocks->add_option("--k", blocks_cfg.k, "Number of blocks to keep, or 'min'");
    blocks->add_option("--out", blocks_cfg.outputPath, "Report path (default: standard output)");

    RunConfig oracle_cfg;
    auto* oracle_cmd = app.add_subcommand("oracle", "Compare the greedy selection with exhaustive enumeration");
    oracle_cmd->add_option("--manifest", oracle_cfg.inputPath, "Block manifest")->required();
    oracle_cmd->add_option("--k", oracle_cfg.k, "Subset size, or 'min'")->required();
    oracle_cmd->add_option("--enum-cap", oracle_cfg.enumCap, "Maximum number of subsets to enumerate");
    oracle_cmd->add_option("--out", oracle_cfg.outputPath, "Report path (default: standard output)");

    BoundArgs bound_args;
    auto* bound_cmd = app.add_subcommand("bound", "Evaluate a closed-form bound");
    bound_cmd->add_option("--m", bound_args.m, "Number of candidates")->required();
    bound_cmd->add_option("--n", bound_args.n, "Dimension")->required();
    bound_cmd->add_option("--k", bound_args.k, "Subset size");
    bound_cmd->add_option("--r", bound_args.r, "Kept unit columns (isotropic case)");
    bound_cmd->add_option("--tr-ainv", bound_args.trAinv, "Tr(A^-1)");
    bound_cmd->add_option("--tr-ainvb", bound_args.trAinvB, "Tr(A^-1 B)");
    bound_cmd->add_option("--tr-a2invb", bound_args.trA2invB, "Tr(A^-2 B)");
    bound_cmd->add_option("--out", bound_args.outputPath, "Output path (default: standard output)");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Write a seeded random instance");
    gen_cmd->add_option("--kind", gen_args.kind, "columns or blocks")->required()->check(CLI::IsMember({"columns", "blocks"}));
    gen_cmd->add_option("--n", gen_args.n, "Dimension")->required();
    gen_cmd->add_option("--m", gen_args.m, "Number of columns or blocks")->required();
    gen_cmd->add_option("--seed", gen_args.seed, "Random seed")->required();
    gen_cmd->add_option("--fixed-rank", gen_args.fixedRank, "Rank of the fixed block (blocks only; default random)");
    gen_cmd->add_option("--out", gen_args.outDir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*columns) {
            return select_columns(columns_cfg);
        }
        if (*blocks) {
            return select_blocks(blocks_cfg);
        }
        if (*oracle_cmd) {
            return oracle(oracle_cfg);
        }
        if (*bound_cmd) {
            return bound(bound_args);
        }
        if (*gen_cmd) {
            return generate(gen_args);
        }
    } catch (const Error& e) {
        std::cerr << "subsel: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "subsel: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
