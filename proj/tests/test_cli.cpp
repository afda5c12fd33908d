#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "cdq");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cdq::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(CDQ_SAMPLES_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("cdq_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

} // namespace

TEST(Cli, EquivalentSidesOfR13) {
    const auto r = run({"equiv", sample("r13_lhs.cdq"), sample("r13_rhs.cdq")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "equivalent\n");
}

TEST(Cli, Inequivalent) {
    const auto r = run({"equiv", sample("t9.cdq"), temp_file("t2.cdq", "qubits 1\nt 0\nt 0\n")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "inequivalent\n");
}

TEST(Cli, NormalizeNineTs) {
    const auto r = run({"normalize", sample("t9.cdq")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "qubits 1\nt 0\n");
}

TEST(Cli, RoutesAgreeByteForByte) {
    for (const char* f : {"r13_lhs.cdq", "r13_rhs.cdq", "t9.cdq", "toffoli_phase.cdq"}) {
        const auto a = run({"normalize", sample(f), "--via", "semantic"});
        const auto b = run({"normalize", sample(f), "--via", "rewriting"});
        EXPECT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << f;
    }
}

TEST(Cli, TraceGoesToStderr) {
    const auto r = run({"normalize", sample("t9.cdq"), "--trace"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "qubits 1\nt 0\n");
    EXPECT_EQ(r.err, "(R7, 0, ltr)\n");
}

TEST(Cli, CnotTModeRejectsX) {
    const auto r = run({"normalize", sample("toffoli_phase.cdq"), "--mode", "cnott"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, ParseErrorExitsTwo) {
    const auto r = run({"normalize", temp_file("bad.cdq", "qubits 1\nh 0\n")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
    EXPECT_EQ(run({"normalize", "/nonexistent/file.cdq"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, SimulateBasisInput) {
    const auto f = temp_file("sim.cdq", "qubits 2\ncnot 0 1\nt 1\n");
    auto r = run({"simulate", f, "--input", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "(1, 11)\n");
    r = run({"simulate", f, "--input", "10", "--json"});
    EXPECT_EQ(nlohmann::json::parse(r.out), (nlohmann::json{{"phase", 1}, {"output", "11"}}));
    EXPECT_EQ(run({"simulate", f, "--input", "1"}).code, 2);
}

TEST(Cli, SimulateWholeOperator) {
    const auto r = run({"simulate", sample("t9.cdq"), "--json"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("phase"), nlohmann::json({0, 1}));
    EXPECT_EQ(j.at("matrix"), nlohmann::json({"1"}));
}

TEST(Cli, Phasepoly) {
    const auto r = run({"phasepoly", sample("r13_lhs.cdq")});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("diagonal").at("a"), nlohmann::json({5, 5, 5, 5}));
    EXPECT_EQ(j.at("diagonal").at("b").at("1,3"), 3);
    EXPECT_EQ(j.at("diagonal").at("c").at("0,2,3"), 1);
    EXPECT_EQ(j.at("affine").at("offset"), "0000");
}

TEST(Cli, CountWithEnumeration) {
    const auto r = run({"count", "--qubits", "2", "--enumerate"});
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("formula"), 49152);
    EXPECT_EQ(j.at("enumerated"), 49152);
    EXPECT_EQ(j.at("match"), true);
}

TEST(Cli, CountVariants) {
    auto j = nlohmann::json::parse(run({"count", "--qubits", "3", "--what", "affine", "--enumerate"}).out);
    EXPECT_EQ(j.at("formula"), 1344);
    EXPECT_EQ(j.at("match"), true);
    j = nlohmann::json::parse(run({"count", "--qubits", "2", "--mode", "cnott"}).out);
    EXPECT_EQ(j.at("formula"), 1536);
    EXPECT_TRUE(j.at("enumerated").is_null());
}

TEST(Cli, CapExceededExitsThree) {
    const auto r = run({"count", "--qubits", "3", "--enumerate"});
    EXPECT_EQ(r.code, 3);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, VerifyRelations) {
    auto r = run({"verify-relations"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("FIG2-24"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
    r = run({"verify-relations", "--mode", "cnott"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("R11"), std::string::npos);
}
