#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef CHASEBOUND_DATA_DIR
#error "CHASEBOUND_DATA_DIR must be defined"
#endif

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(CHASEBOUND_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(CHASEBOUND_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / ("chasebound_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST(Cli, ChaseExitCodes) {
    EXPECT_EQ(run("chase --variant so " + data("ex1.erl") + " " + data("ex1_instance.erl")).code, 0);
    EXPECT_EQ(run("chase --variant o --fuel 5 " + data("ex1.erl") + " " + data("ex1_instance.erl")).code, 2);
}

TEST(Cli, UsageAndInputErrors) {
    EXPECT_EQ(run("").code, 64);
    EXPECT_EQ(run("chase --variant nope " + data("ex1.erl") + " " + data("ex1_instance.erl")).code, 64);
    EXPECT_EQ(run("chase /nonexistent/rules.erl /nonexistent/inst.erl").code, 66);
    auto bad = scratch("bad.erl", "p(X,Y -> q(X).");
    EXPECT_EQ(run("ct " + bad).code, 65);
    auto arity = scratch("arity.erl", "p(X) -> q(X). q(X,Y) -> p(X).");
    EXPECT_EQ(run("ct " + arity).code, 65);
}

TEST(Cli, VerdictExitCodes) {
    EXPECT_EQ(run("ct --variant so " + data("ex1.erl")).code, 0);
    EXPECT_EQ(run("ct --variant o " + data("ex1.erl")).code, 2);
    EXPECT_EQ(run("check-kbounded --k 1 --variant o " + data("ex2_sigma2.erl")).code, 0);
    EXPECT_EQ(run("check-kbounded --k 1 --variant o " + data("ex2_sigma1.erl")).code, 1);
    EXPECT_EQ(run("check-kbounded --k 1 --variant o --ceiling 5 " + data("ex2_sigma1.erl")).code, 2);
}

TEST(Cli, ReportShape) {
    auto r = run("ct --variant so " + data("ex1.erl"));
    EXPECT_NE(r.out.find("\"tool_version\": \"0.1.0\""), std::string::npos);
    EXPECT_NE(r.out.find("\"verdict\": \"yes\""), std::string::npos);
    auto h = run("--human ct --variant so " + data("ex1.erl"));
    EXPECT_EQ(h.out.find('{'), std::string::npos);
    EXPECT_NE(h.out.find("verdict: yes"), std::string::npos);
}

TEST(Cli, TransformRoundTrip) {
    auto enc = run("--human transform --op fe-encode " + data("ex1.erl") + " " + data("ex1_instance.erl"));
    EXPECT_EQ(enc.code, 0);
    EXPECT_NE(enc.out.find("p_plus"), std::string::npos);
    auto df = run("--human transform --op df " + data("df_footnote.erl"));
    EXPECT_NE(df.out.find("_fe]"), std::string::npos);
}

TEST(Cli, ReprosMatchGolden) {
    for (auto id : {"ex1", "ex2", "frdepth", "prop4", "df-footnote", "so-embedding"})
        EXPECT_EQ(run(std::string("repro ") + id).code, 0) << id;
    EXPECT_EQ(run("repro nope").code, 64);
}

TEST(Cli, Deterministic) {
    const std::string cmds[] = {
        "chase --variant o --fuel 6 --provenance --trace " + data("frdepth.erl") + " " + data("frdepth_instance.erl"),
        "rewrite --fuel 3 " + data("prop4.erl") + " " + data("prop4_query.q"),
        "classify --variant o " + data("ex2_sigma1.erl"),
    };
    for (const auto& c : cmds) {
        auto a = run(c), b = run(c);
        EXPECT_EQ(a.out, b.out) << c;
        EXPECT_FALSE(a.out.empty()) << c;
    }
    auto j1 = run("check-kbounded --k 1 --variant o --jobs 1 " + data("ex2_sigma1.erl"));
    auto j8 = run("check-kbounded --k 1 --variant o --jobs 8 " + data("ex2_sigma1.erl"));
    EXPECT_EQ(j1.out, j8.out);
}
