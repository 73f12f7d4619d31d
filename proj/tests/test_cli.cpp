#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + HLS_LAB_BINARY + std::string(" ") + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, ConstantsThreeOne) {
    const auto r = run("constants --n 3 --s 1");
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_NEAR(j["summary"]["constants"]["S"].get<double>(), 5.4779, 1e-4);
    for (const char* k : {"n", "s", "L", "m", "seed", "version"}) EXPECT_TRUE(j["meta"].contains(k)) << k;
    EXPECT_TRUE(j["summary"]["pass"].get<bool>());
}

TEST(Cli, InvalidParamsExit2) {
    EXPECT_EQ(run("constants --n 3 --s 1.5").code, 2);
    EXPECT_EQ(run("constants --n 3 --s 1 --slack 25").code, 2);
    EXPECT_EQ(run("constants --n 3 --s 1 --slack 0").code, 2);
    EXPECT_EQ(run("constants --n 3 --s 1 --format xml").code, 2);
    EXPECT_EQ(run("survey --eps 2").code, 2);
    EXPECT_EQ(run("struwe --kmax 2").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, MultiplierTable) {
    const auto r = run("constants --n 4 --s 1 --L 8");
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    ASSERT_EQ(j["records"].size(), 9u);
    for (std::size_t i = 1; i < 9; ++i)
        EXPECT_LT(j["records"][i]["lambda"].get<double>(), j["records"][i - 1]["lambda"].get<double>());
}

TEST(Cli, SurveyPasses) {
    const auto r = run("survey --n 3 --s 1 --eps 1e-3");
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_GE(j["summary"]["overall"]["min_quotient"].get<double>(), 0.95 * j["summary"]["C_loc"].get<double>());
}

TEST(Cli, DualPasses) {
    const auto r = run("dual --n 3 --s 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(Json::parse(r.out)["summary"]["pass"].get<bool>());
}

TEST(Cli, OtherSuitesPass) {
    for (const char* c : {"selftest", "struwe --n 3 --s 1", "compare --n 4 --s 1", "expansion --n 5 --s 1.5",
                          "sobolev --n 3 --s 1"})
        EXPECT_EQ(run(c).code, 0) << c;
}

TEST(Cli, UnwritableOutputExit3) {
    EXPECT_EQ(run("constants --out /nonexistent-dir/x/report.json").code, 3);
}

TEST(Cli, DeterministicOutput) {
    const auto a = run("survey --n 3 --s 1 --eps 1e-3", "HLS_LAB_THREADS=1");
    const auto b = run("survey --n 3 --s 1 --eps 1e-3", "HLS_LAB_THREADS=4");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run("selftest --seed 7").out, run("selftest --seed 7").out);
}

TEST(Cli, CsvAndPlotFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "hls_lab_cli_test";
    std::filesystem::create_directories(dir);
    const auto csv = dir / "c.csv", plot = dir / "p.csv";
    ASSERT_EQ(run("constants --n 4 --s 1 --L 8 --format csv --out " + csv.string() + " --emit-plot " + plot.string()).code, 0);
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, text.find('\n')), "l,lambda,inverse");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
    const auto p = slurp(plot);
    EXPECT_EQ(p.substr(0, p.find('\n')), "series,x,y");
    std::filesystem::remove_all(dir);
}
