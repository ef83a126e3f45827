#include <qtv/complex3d.hpp>
#include <qtv/suites.hpp>
#include <qtv/weightcat.hpp>

#include <gtest/gtest.h>

#include <regex>

using namespace qtv;

namespace {

TriangulationFile load(const std::string& name) {
    return parse_triangulation_json(read_file(std::string(QTV_DATA_DIR) + "/" + name));
}

} // namespace

TEST(Complex, ShippedTwoTetrahedronComplex) {
    auto F = load("s3_unknot.json");
    EXPECT_EQ(F.T.n_tets(), 2);
    EXPECT_EQ(F.T.n_vertices(), 4);
    EXPECT_EQ(F.T.n_edges(), 6);
    EXPECT_EQ(F.T.Y.size(), 4u);
    EXPECT_TRUE(F.T.closed());
    EXPECT_EQ(F.T.euler(), 0);
    auto rep = validate(F.T);
    EXPECT_TRUE(rep.ok()) << rep.summary();
    ASSERT_TRUE(F.coloring);
    EXPECT_TRUE(color_check(F.T, *F.coloring));
    EXPECT_TRUE(is_admissible(*F.coloring));
}

TEST(Complex, ShippedBubbleComplex) {
    auto F = load("s3_unknot_bubble.json");
    EXPECT_EQ(F.T.n_tets(), 4);
    EXPECT_TRUE(validate(F.T).ok()) << validate(F.T).summary();
    EXPECT_TRUE(color_check(F.T, *F.coloring));
}

TEST(Complex, OrientationPreservingGluingIsReported) {
    std::string text = read_file(std::string(QTV_DATA_DIR) + "/s3_unknot.json");
    text = std::regex_replace(text, std::regex(R"("signs"\s*:\s*\[\s*1\s*,\s*-1\s*\])"), R"("signs": [1, 1])");
    auto F = parse_triangulation_json(text);
    EXPECT_FALSE(validate(F.T).ok());
}

TEST(Complex, MalformedFileReportsTheLine) {
    try {
        parse_triangulation_json("{\n  \"tets\": [[1,2,3,4]],\n  \"signs\": [1,]\n}\n");
        FAIL() << "expected a parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_triangulation_json(R"({"tets": [[1,2,3]]})"), Error);
}

TEST(Colorings, GaugeAndPotentialKeepTheFaceCondition) {
    auto F = load("s3_unknot.json");
    auto c = coloring_from_potential(F.T, {{1, 0.05}, {2, 0.4}, {3, 0.66}, {4, 0.9}});
    EXPECT_TRUE(color_check(F.T, c));
    auto g = gauge_act(F.T, {{2, 0.3}}, *F.coloring);
    EXPECT_TRUE(color_check(F.T, g));
    // antisymmetry on an edge
    EXPECT_NEAR(frac(g.on(F.T, 0, 0, 1) + g.on(F.T, 0, 1, 0)), 0.0, 1e-12);
    GColoring bad = *F.coloring;
    bad.phi[0] = frac(bad.phi[0] + 0.1);
    EXPECT_FALSE(color_check(F.T, bad));
    // potential difference 1/2 across the edge 1-2
    auto half = coloring_from_potential(F.T, {{1, 0.0}, {2, 0.5}, {3, 0.2}, {4, 0.7}});
    EXPECT_FALSE(is_admissible(half));
    std::mt19937_64 rng(3);
    auto fixed = make_admissible(F.T, half, rng);
    EXPECT_TRUE(is_admissible(fixed));
    EXPECT_TRUE(color_check(F.T, fixed));
}

TEST(States, CountIsROverEdges) {
    auto F = load("s3_unknot.json");
    StateSpace S(RootData(3), F.T, *F.coloring);
    EXPECT_EQ(S.count(), 729);
    auto st = S.at(728);
    for (int x : st) EXPECT_EQ(x, 2);
    EXPECT_NEAR(degree(S.label(0, 1)), F.coloring->phi[0], 1e-12);
}

TEST(Moves, BubbleAndItsInverse) {
    auto F = load("s3_unknot.json");
    std::mt19937_64 rng(1);
    auto B = bubble(F.T, F.T.Y[0], &*F.coloring, &rng);
    EXPECT_EQ(B.T.n_tets(), 4);
    EXPECT_EQ(B.T.n_vertices(), 5);
    EXPECT_TRUE(validate(B.T).ok());
    ASSERT_TRUE(B.coloring);
    EXPECT_TRUE(color_check(B.T, *B.coloring));
    auto IB = inverse_bubble(B.T, 5, &*B.coloring);
    EXPECT_EQ(iso_signature(IB.T), iso_signature(F.T));
    EXPECT_THROW(bubble(F.T, 99), Error);
}

TEST(Moves, TwoThreeOnTheTwoTetrahedronComplexLeavesQuasiRegularity) {
    auto F = load("s3_unknot.json");
    try {
        pachner23(F.T, 0, 0);
        FAIL() << "expected a quasi-regularity error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::QuasiRegularity);
    }
}

TEST(Moves, TwoThreeThenThreeTwo) {
    auto F = load("s3_unknot_bubble.json");
    const std::string sig = iso_signature(F.T);
    int tried = 0;
    for (int t = 0; t < F.T.n_tets(); ++t)
        for (int f = 0; f < 4; ++f) {
            MoveResult P;
            try {
                P = pachner23(F.T, t, f, &*F.coloring);
            } catch (const Error&) {
                continue;
            }
            ++tried;
            EXPECT_EQ(P.T.n_tets(), F.T.n_tets() + 1);
            EXPECT_TRUE(validate(P.T).ok());
            EXPECT_TRUE(color_check(P.T, *P.coloring));
            bool back = false;
            for (int e = 0; e < P.T.n_edges() && !back; ++e) {
                if (P.T.edge_slots_of(e).size() != 3 || P.T.in_Y(e)) continue;
                try {
                    back = iso_signature(pachner32(P.T, e).T) == sig;
                } catch (const Error&) {
                }
            }
            EXPECT_TRUE(back);
        }
    EXPECT_GT(tried, 0);
}

TEST(Moves, Lune) {
    auto F = load("s3_unknot_bubble.json");
    int ok = 0;
    for (int t = 0; t < F.T.n_tets(); ++t)
        for (int f2 = 1; f2 < 4; ++f2) {
            try {
                auto L = lune(F.T, t, 0, f2, &*F.coloring);
                EXPECT_EQ(L.T.n_tets(), F.T.n_tets() + 2);
                EXPECT_TRUE(validate(L.T).ok());
                EXPECT_TRUE(color_check(L.T, *L.coloring));
                ++ok;
            } catch (const Error&) {
            }
        }
    EXPECT_GT(ok, 0);
}

TEST(Iso, SignatureIgnoresVertexNames) {
    auto a = load("s3_unknot.json");
    // vertex 1 renamed to 9
    auto b = parse_triangulation_json(R"({
  "tets": [[9, 2, 3, 4], [9, 2, 3, 4]],
  "signs": [1, -1],
  "gluings": [
    {"tet": 0, "face": 0, "to_tet": 1, "to_face": 0, "perm": [0, 1, 2, 3]},
    {"tet": 0, "face": 1, "to_tet": 1, "to_face": 1, "perm": [0, 1, 2, 3]},
    {"tet": 0, "face": 2, "to_tet": 1, "to_face": 2, "perm": [0, 1, 2, 3]},
    {"tet": 0, "face": 3, "to_tet": 1, "to_face": 3, "perm": [0, 1, 2, 3]}
  ],
  "Y": [[9, 2], [2, 3], [3, 4], [4, 9]]
})");
    EXPECT_EQ(iso_signature(a.T), iso_signature(b.T));
    std::mt19937_64 rng(2);
    EXPECT_NE(iso_signature(a.T), iso_signature(bubble(a.T, a.T.Y[0], nullptr, &rng).T));
}

TEST(Files, JsonRoundTrip) {
    auto F = load("s3_unknot_bubble.json");
    auto G = parse_triangulation_json(triangulation_to_json(F.T, &*F.coloring));
    EXPECT_EQ(iso_signature(F.T), iso_signature(G.T));
    EXPECT_EQ(F.T.Y.size(), G.T.Y.size());
    ASSERT_TRUE(G.coloring);
    EXPECT_EQ(F.coloring->phi, G.coloring->phi);
}

TEST(Suites, MovesPass) {
    SuiteConfig cfg;
    cfg.data_dir = QTV_DATA_DIR;
    auto rep = run_suite("moves", cfg);
    for (const auto& l : rep.lines) EXPECT_TRUE(l.passed()) << l.name << " " << l.detail;
}
