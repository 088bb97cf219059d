#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.hpp"

using namespace subsel;
using testutil::kind_of;
using testutil::mat;

namespace fs = std::filesystem;

namespace {

const std::string fixtures = SUBSEL_FIXTURE_DIR;

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("subsel_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& body) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << body;
        return p.string();
    }

    fs::path dir_;
};

std::string message_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

} // namespace

using MatrixFiles = TempDir;

TEST_F(MatrixFiles, CsvAndMatrixMarketIdentity) {
    EXPECT_EQ(io::parse_matrix_file(write("i.csv", "1,0\n0,1\n")), Matrix::Identity(2, 2));
    EXPECT_EQ(io::parse_matrix_file(write("i.mtx", "%%MatrixMarket matrix array real general\n% comment\n2 2\n1\n0\n0\n1\n")),
              Matrix::Identity(2, 2));
    EXPECT_EQ(io::parse_matrix_file(write("s.csv", " 1.5 , -2e-3\n\n3,4\n")), mat({{1.5, -2e-3}, {3, 4}}));
}

TEST_F(MatrixFiles, SymmetricMatrixMarket) {
    const Matrix m = io::parse_matrix_file(write("s.mtx", "%%MatrixMarket matrix array real symmetric\n3 3\n1\n2\n3\n4\n5\n6\n"));
    EXPECT_EQ(m, mat({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}}));
    const Matrix g = io::parse_matrix_file(write("g.mtx", "%%MatrixMarket matrix array integer general\n2 3\n1\n2\n3\n4\n5\n6\n"));
    EXPECT_EQ(g, mat({{1, 3, 5}, {2, 4, 6}}));
}

TEST_F(MatrixFiles, Errors) {
    const std::string ragged = write("r.csv", "1,2\n3,4\n5\n");
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(ragged); }), ErrorKind::ParseError);
    EXPECT_NE(message_of([&] { io::parse_matrix_file(ragged); }).find("r.csv:3"), std::string::npos);

    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("e.csv", "")); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("w.csv", "\n  \n")); }), ErrorKind::EmptyFile);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("n.csv", "1,abc\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("inf.csv", "1,inf\n")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file((dir_ / "missing.csv").string()); }), ErrorKind::IoError);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("c.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n")); }),
              ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_matrix_file(write("short.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n")); }),
              ErrorKind::ParseError);
}

TEST_F(MatrixFiles, WritersRoundTripBitExact) {
    gen::Rng rng(17);
    const Matrix m = gen::gaussian(4, 3, rng) * 1e-3;
    const std::string csv = (dir_ / "m.csv").string();
    const std::string mtx = (dir_ / "m.mtx").string();
    io::write_csv(csv, m);
    io::write_matrix_market(mtx, m);
    EXPECT_EQ(io::parse_matrix_file(csv), m);
    EXPECT_EQ(io::parse_matrix_file(mtx), m);
}

TEST(FormatDouble, ShortestForms) {
    EXPECT_EQ(io::format_double(2.0), "2");
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(io::format_double(-1.5e-20), "-1.5000000000000001e-20");
}

using Manifests = TempDir;

TEST_F(Manifests, ToyFixture) {
    const BlockProblem p = io::parse_block_manifest(fixtures + "/toy_blocks/manifest.json");
    EXPECT_EQ(p.n, 1);
    EXPECT_EQ(p.m(), 2);
    EXPECT_TRUE(p.fixed_is_zero());
    EXPECT_EQ(p.candidates[1].label(), "second");
}

TEST_F(Manifests, MixedFormsFixture) {
    const BlockProblem p = io::parse_block_manifest(fixtures + "/fixed_blocks/manifest.json");
    EXPECT_EQ(p.n, 3);
    EXPECT_EQ(p.m(), 6);
    EXPECT_TRUE(p.fixed.is_factor());
    EXPECT_FALSE(p.candidates[0].is_factor());
    EXPECT_EQ(p.candidates[2].factor().cols(), 2);
    EXPECT_EQ(p.candidates[3].dense(), mat({{1, 0, 0.5}, {0, 0, 0}, {0.5, 0, 1}}));
}

TEST_F(Manifests, ValidationFailures) {
    write("a.csv", "1,0\n0,0\n");
    write("b.csv", "2,0\n0,0\n");
    const std::string rank = write("rank.json", R"({"n": 2, "candidates": [{"file": "a.csv"}, {"file": "b.csv"}]})");
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest(rank); }), ErrorKind::ValidationFailed);
    EXPECT_NE(message_of([&] { io::parse_block_manifest(rank); }).find("rank"), std::string::npos);

    write("f3.csv", "1\n2\n3\n");
    write("i2.csv", "1,0\n0,1\n");
    const std::string dims =
        write("dims.json", R"({"n": 2, "candidates": [{"file": "i2.csv"}, {"file": "f3.csv", "form": "factor"}]})");
    EXPECT_NE(message_of([&] { io::parse_block_manifest(dims); }).find("dimension"), std::string::npos);

    write("asym.csv", "1,2\n0,1\n");
    const std::string asym = write("asym.json", R"({"n": 2, "candidates": [{"file": "i2.csv"}, {"file": "asym.csv"}]})");
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest(asym); }), ErrorKind::ValidationFailed);
    EXPECT_NE(message_of([&] { io::parse_block_manifest(asym); }).find("symmetry"), std::string::npos);

    write("neg.csv", "1,0\n0,-0.001\n");
    const std::string neg = write("neg.json", R"({"n": 2, "candidates": [{"file": "i2.csv"}, {"file": "neg.csv"}]})");
    EXPECT_NE(message_of([&] { io::parse_block_manifest(neg); }).find("psd"), std::string::npos);

    write("t.csv", "3,0\n0,2\n");
    const std::string total =
        write("total.json", R"({"n": 2, "candidates": [{"file": "i2.csv"}, {"file": "i2.csv"}], "total": {"file": "t.csv"}})");
    EXPECT_NE(message_of([&] { io::parse_block_manifest(total); }).find("reconstruction"), std::string::npos);
}

TEST_F(Manifests, SyntaxErrors) {
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest(write("bad.json", "{ not json")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest(write("non.json", R"({"n": 0, "candidates": []})")); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest(write("form.json", R"({"n": 1, "candidates": [{"file": "x", "form": "odd"}]})")); }),
              ErrorKind::ParseError);
    EXPECT_EQ(kind_of([&] { io::parse_block_manifest((dir_ / "absent.json").string()); }), ErrorKind::IoError);
}

TEST(ReportJson, RoundTripIsBitExact) {
    gen::Rng rng(21);
    for (int t = 0; t < 30; ++t) {
        const Index n = gen::uniform_index(1, 5, rng);
        const Index m = gen::uniform_index(n + 1, 10, rng);
        const BlockProblem p = gen::random_block_problem(n, m, gen::uniform_index(0, n, rng), rng);
        const auto r = run_block_selection(p, minimal_k(p));
        const auto j = nlohmann::json::parse(to_json_text(report_to_json(r)));
        EXPECT_EQ(j["achieved_trace"].get<double>(), r.achievedTrace);
        EXPECT_EQ(j["bound"].get<double>(), r.bound);
        ASSERT_EQ(j["steps"].size(), r.steps.size());
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            EXPECT_EQ(j["steps"][i]["alpha"].get<double>(), r.steps[i].alpha);
            EXPECT_EQ(j["steps"][i]["margin"].get<double>(), r.steps[i].margin);
            EXPECT_EQ(j["steps"][i]["trace_after"].get<double>(), r.steps[i].traceAfter);
            EXPECT_EQ(j["steps"][i]["removed"].get<Index>(), r.steps[i].removedIndex + 1);
        }
        ASSERT_EQ(j["chosen"].size(), r.chosen.size());
        for (std::size_t i = 0; i < r.chosen.size(); ++i) {
            EXPECT_EQ(j["chosen"][i].get<Index>(), r.chosen[i] + 1);
        }
    }
}

TEST(ReportJson, ZeroStepReport) {
    const BlockProblem p(1, {PsdBlock::rank_one(Vector::Ones(1))});
    const std::string text = to_json_text(report_to_json(run_block_selection(p, 1)));
    EXPECT_NE(text.find("\"steps\": []"), std::string::npos);
    EXPECT_NE(text.find("\"chosen\": [1]"), std::string::npos);
    EXPECT_EQ(text.back(), '\n');
}
