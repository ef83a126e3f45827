#include <qtv/diagram.hpp>
#include <qtv/suites.hpp>

#include <gtest/gtest.h>

using namespace qtv;

namespace {

std::string data(const std::string& name) { return read_file(std::string(QTV_DATA_DIR) + "/" + name); }

double spread(const RootData& rd, const RibbonDiagram& D, Scalar* value) {
    auto cuts = admissible_cuts(rd, D);
    EXPECT_FALSE(cuts.empty());
    Scalar v0 = gprime(rd, D, cuts[0]);
    double dev = 0;
    for (const auto& c : cuts) dev = std::max(dev, std::abs(gprime(rd, D, c) - v0) / std::abs(v0));
    if (value) *value = v0;
    return dev;
}

} // namespace

TEST(Diagram, UnknotFileGivesModifiedDimension) {
    for (int r : {3, 5}) {
        RootData rd(r);
        std::map<std::string, Scalar> colors;
        auto D = parse_diagram_json(data("unknot.json"), &colors);
        ASSERT_TRUE(D.closed());
        Scalar v;
        EXPECT_LT(spread(rd, D, &v), 1e-9);
        EXPECT_LT(std::abs(v - mdim(rd, colors.at("a"))), 1e-9);
    }
}

TEST(Diagram, HopfFileIsCutIndependentAndMatchesSPrime) {
    for (int r : {3, 5}) {
        RootData rd(r);
        auto D = parse_diagram_json(data("hopf.json"));
        Scalar v;
        EXPECT_LT(spread(rd, D, &v), 1e-9);
        EXPECT_LT(std::abs(v - mdim(rd, 1.77) * sprime_closed(rd, 0.31, 1.77)), 1e-9);
    }
}

TEST(Diagram, PDHopfIsTheMirrorOfTheMorseHopf) {
    // real colors: mirroring conjugates the value
    RootData rd(3);
    Scalar morse, pd;
    spread(rd, parse_diagram_json(data("hopf.json")), &morse);
    EXPECT_LT(spread(rd, parse_pd_json(data("hopf_pd.json")), &pd), 1e-9);
    EXPECT_LT(std::abs(pd - std::conj(morse)), 1e-9);
}

TEST(Diagram, TrefoilFromPDIsCutIndependent) {
    for (int r : {3, 5}) EXPECT_LT(spread(RootData(r), parse_pd_json(data("trefoil_pd.json")), nullptr), 1e-8);
}

TEST(Diagram, CurlsAndZigzag) {
    RootData rd(5);
    Scalar a = 1.23;
    Mat z = evaluate(rd, catalog::zigzag(a)).m;
    EXPECT_LT((z - Mat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-10);
    Scalar pos = scalar_of(rd, evaluate(rd, catalog::curl(a, true)));
    Scalar neg = scalar_of(rd, evaluate(rd, catalog::curl(a, false)));
    EXPECT_LT(std::abs(pos * neg - 1.0), 1e-10);
    EXPECT_LT(std::abs(neg - twist_scalar(rd, a)), 1e-10);
}

TEST(Diagram, StackAndJuxtapose) {
    RootData rd(3);
    auto D = stack(catalog::zigzag(0.4), catalog::curl(0.4, true));
    EXPECT_EQ(D.slices.size(), 5u);
    auto J = juxtapose(catalog::identity(0.4), catalog::identity(1.1));
    EXPECT_EQ(J.bottom.size(), 2u);
    EXPECT_EQ(evaluate(rd, J).m.rows(), 9);
    EXPECT_THROW(stack(catalog::identity(0.4), catalog::identity(1.1)), Error);
}

TEST(Diagram, JsonRoundTrip) {
    RootData rd(3);
    auto D = parse_diagram_json(data("hopf.json"));
    auto D2 = parse_diagram_json(diagram_to_json(D));
    EXPECT_LT(std::abs(gprime(rd, D, {1, 0}) - gprime(rd, D2, {1, 0})), 1e-12);
}

TEST(Diagram, MalformedFileReportsTheLine) {
    const std::string bad = "{\n  \"slices\": [\n    {\"kind\": \"cup\", \"pos\": 0, \"color\": 0.3}\n    {\"kind\": \"cap\"}\n  ]\n}\n";
    try {
        parse_diagram_json(bad);
        FAIL() << "expected a parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_diagram_json(R"({"slices": [{"kind": "twirl", "pos": 0}]})"), Error);
    EXPECT_THROW(parse_pd_json(R"({"pd": [[1, 2, 3]], "colors": [0.3]})"), Error);
}

TEST(Diagram, MismatchedCapIsRejected) {
    RootData rd(3);
    RibbonDiagram D;
    D.slices = {Slice::cup(0, {0.3, false}), Slice::cup(2, {0.7, false}), Slice::cap(1)};
    EXPECT_THROW(evaluate(rd, D), Error);
}

TEST(Suites, SPrimeModifiedDimensionAndAmbidexterityPass) {
    SuiteConfig cfg;
    for (const char* s : {"sprime", "mdim", "ambi"}) {
        auto rep = run_suite(s, cfg);
        for (const auto& l : rep.lines) EXPECT_TRUE(l.passed()) << s << ": " << l.name << " " << l.value;
    }
}
