#include <qtv/suites.hpp>
#include <qtv/weightcat.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(QTV_CLI_PATH) + " " + args + " 2>/dev/null";
    Run res;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return res;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) res.out.append(buf, n);
    int st = pclose(p);
    res.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return res;
}

std::string data(const std::string& name) { return std::string(QTV_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / ("qtv_test_" + name);
    std::ofstream(p) << text;
    return p.string();
}

qtv::Scalar invariant(const json& j) { return {j["invariant"][0].get<double>(), j["invariant"][1].get<double>()}; }

json strip_runtime(json j) {
    if (j.is_object()) {
        j.erase("runtime_ms");
        for (auto& [k, v] : j.items()) v = strip_runtime(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = strip_runtime(v);
    }
    return j;
}

} // namespace

TEST(Cli, LinkUnknotIsTheModifiedDimension) {
    auto r = run("--r 5 link " + data("unknot.json"));
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_LT(std::abs(invariant(j) - qtv::mdim(qtv::RootData(5), 0.37)), 1e-9);
}

TEST(Cli, LinkHopfTwoCutsAgree) {
    auto a = run("link " + data("hopf.json") + " --cut 0"), b = run("link " + data("hopf.json") + " --cut 5");
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_LT(std::abs(invariant(json::parse(a.out)) - invariant(json::parse(b.out))), 1e-9);
    auto all = json::parse(run("link " + data("trefoil_pd.json") + " --all-cuts").out);
    EXPECT_LT(all["residuals"]["cut_independence"].get<double>(), 1e-8);
}

TEST(Cli, MalformedFileIsAParseError) {
    auto f = temp_file("bad.json", "{\n  \"slices\": [\n    {\"kind\": \"cap\" \"pos\": 0}\n  ]\n}\n");
    std::string cmd = std::string(QTV_CLI_PATH) + " link " + f + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    char buf[1024] = {0};
    size_t n = fread(buf, 1, sizeof buf - 1, p);
    int st = pclose(p);
    EXPECT_EQ(WEXITSTATUS(st), 2);
    EXPECT_NE(std::string(buf, n).find("line 3"), std::string::npos) << buf;
}

TEST(Cli, TvBaselineAndKashaevAgree) {
    auto tv = run("tv " + data("s3_unknot.json"));
    ASSERT_EQ(tv.code, 0);
    auto jt = json::parse(tv.out);
    EXPECT_LT(std::abs(invariant(jt) - 1.0 / 27.0), 1e-9);
    EXPECT_EQ(jt["states"].get<long long>(), 729);
    for (const char* extra : {"", " --charge 1 --order 3,1,4,2 --sqrt-seed 5"}) {
        auto k = run("kashaev " + data("s3_unknot.json") + extra);
        ASSERT_EQ(k.code, 0);
        EXPECT_LT(std::abs(invariant(json::parse(k.out)) - invariant(jt)), 1e-6 * std::abs(invariant(jt)));
    }
}

TEST(Cli, ReportsAreReproducible) {
    auto a = run("--threads 2 tv " + data("s3_unknot_bubble.json"));
    auto b = run("--threads 1 tv " + data("s3_unknot_bubble.json"));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(strip_runtime(json::parse(a.out)).dump(), strip_runtime(json::parse(b.out)).dump());
    auto c1 = run("--seed 4 check ribbon --samples 2"), c2 = run("--seed 4 check ribbon --samples 2");
    EXPECT_EQ(c1.code, 0);
    EXPECT_EQ(strip_runtime(json::parse(c1.out)).dump(), strip_runtime(json::parse(c2.out)).dump());
}

TEST(Cli, SixjCommand) {
    auto r = run("sixj 0.3 1.45 1.75 0.6 2.35 2.05");
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["factors"].size(), 4u);
    EXPECT_GT(std::abs(invariant(j)), 0.0);
    EXPECT_EQ(run("sixj 1 1.45 1.75 0.6 2.35 2.05").code, 3);
    EXPECT_EQ(run("sixj 0.3 1.45").code, 2);
}

TEST(Cli, CheckExitCodes) {
    EXPECT_EQ(run("check relations").code, 0);
    // thresholds scaled far below rounding error
    EXPECT_EQ(run("--eps 1e-30 check relations --samples 3").code, 4);
    EXPECT_EQ(run("check no-such-suite").code, 3);
    auto j = json::parse(run("--r 3 check charge").out);
    EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, InadmissibleColoringExitCode) {
    std::string text = qtv::read_file(data("s3_unknot.json"));
    text.replace(text.find("\"2\": 0.13"), 9, "\"2\": 0.5");
    EXPECT_EQ(run("tv " + temp_file("half.json", text)).code, 3);
    EXPECT_EQ(run("--r 4 tv " + data("s3_unknot.json")).code, 3);
}

TEST(Cli, MovesProduceAnEquivalentComplex) {
    auto out = std::filesystem::temp_directory_path() / "qtv_test_moved.json";
    auto m = run("--seed 3 --out " + out.string() + " moves " + data("s3_unknot.json") + " --move bubble --edge 1,2");
    ASSERT_EQ(m.code, 0);
    auto a = json::parse(run("tv " + data("s3_unknot.json")).out);
    auto b = json::parse(run("tv " + out.string()).out);
    EXPECT_EQ(b["tets"].get<int>(), 4);
    EXPECT_LT(std::abs(invariant(a) - invariant(b)), 1e-9);
    EXPECT_EQ(run("moves " + data("s3_unknot.json") + " --move 2-3 --tet 0 --face 0").code, 3);
}
