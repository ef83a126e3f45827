#pragma once

// Oriented 3-dimensional Delta-complexes with a link of edges (H-triangulations),
// torus-valued colorings, gauges, states and the elementary moves.
//
// A tetrahedron is an ordered 4-tuple of vertex ids with an orientation sign.
// Vertex slot a of tetrahedron t is t.v[a]; face f is the face opposite slot f.
// A gluing identifies face f of t with face g of u through a slot permutation
// perm (perm[f] = g).  Edges are classes of tetrahedron edge slots.

#include <qtv/qarith.hpp>

#include <array>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qtv {

struct Gluing {
    int tet = 0, face = 0, to_tet = 0, to_face = 0;
    std::array<int, 4> perm{0, 1, 2, 3};
};

struct Tet {
    std::array<int, 4> v{};
    int sign = 1;
};

// oriented edge slot a -> b of a tetrahedron
struct EdgeSlot {
    int tet, a, b;
};

int edge_index(int a, int b); // unordered slot pair -> 0..5
std::array<int, 2> edge_slots(int idx);

class HTriangulation {
public:
    HTriangulation() = default;
    HTriangulation(std::vector<Tet> tets, std::vector<Gluing> gluings);

    const std::vector<Tet>& tets() const { return tets_; }
    const std::vector<Gluing>& gluings() const { return gluings_; }
    int n_tets() const { return int(tets_.size()); }
    int n_vertices() const { return int(vertex_ids_.size()); }
    int n_edges() const { return int(edge_ends_.size()); }
    int n_faces() const { return 4 * n_tets() - int(gluings_.size()); }
    int euler() const { return n_vertices() - n_edges() + n_faces() - n_tets(); }
    bool closed() const { return int(gluings_.size()) * 2 == 4 * n_tets(); }
    const std::vector<int>& vertex_ids() const { return vertex_ids_; }

    // class of the edge slot and +1/-1 relative to the class orientation
    std::pair<int, int> edge_of(int tet, int a, int b) const;
    std::pair<int, int> edge_ends(int e) const { return edge_ends_[size_t(e)]; } // tail, head ids
    std::vector<EdgeSlot> edge_slots_of(int e) const;
    // neighbor across face f of t: (u, g) or (-1, -1) on the boundary
    std::pair<int, int> neighbor(int t, int f) const { return nb_[size_t(t)][size_t(f)]; }
    const std::array<int, 4>& perm(int t, int f) const { return perm_[size_t(t)][size_t(f)]; }
    // edge classes joining two vertex ids
    std::vector<int> edges_between(int u, int v) const;

    // link edges
    std::vector<int> Y;
    bool in_Y(int e) const;

private:
    void build();
    std::vector<Tet> tets_;
    std::vector<Gluing> gluings_;
    std::vector<int> vertex_ids_;
    std::vector<std::array<std::pair<int, int>, 6>> slot_edge_;
    std::vector<std::pair<int, int>> edge_ends_;
    std::vector<std::array<std::pair<int, int>, 4>> nb_;
    std::vector<std::array<std::array<int, 4>, 4>> perm_;
};

struct ValidationReport {
    std::vector<std::string> issues;
    int euler = 0;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

ValidationReport validate(const HTriangulation& T);

// ---------------------------------------------------------------- colorings

// value of Phi on each edge class along its orientation, in [0, 1)
struct GColoring {
    std::vector<double> phi;
    double on(const HTriangulation& T, int tet, int a, int b) const; // Phi(slot a -> slot b)
};

using Gauge = std::map<int, double>; // vertex id -> degree (missing = 0)

bool color_check(const HTriangulation& T, const GColoring& c, double eps = 1e-9);
bool is_admissible(const GColoring& c, double eps_adm = 1e-6);
GColoring gauge_act(const HTriangulation& T, const Gauge& g, const GColoring& c);
GColoring coloring_from_potential(const HTriangulation& T, const Gauge& f);
GColoring make_admissible(const HTriangulation& T, const GColoring& c, std::mt19937_64& rng,
                          double eps_adm = 1e-6);

// ---------------------------------------------------------------- states

// states are indices 0..r-1 per edge class into state_reps(Phi(e))
class StateSpace {
public:
    StateSpace(const RootData& rd, const HTriangulation& T, const GColoring& c);
    long long count() const { return count_; }
    std::vector<int> at(long long n) const; // mixed radix, edge 0 fastest
    Scalar label(int e, int idx) const { return labels_[size_t(e)][size_t(idx)]; }
    int n_edges() const { return int(labels_.size()); }

private:
    int r_;
    long long count_;
    std::vector<std::vector<Scalar>> labels_;
};

// ---------------------------------------------------------------- moves

struct MoveResult {
    HTriangulation T;
    std::optional<GColoring> coloring;
};

// bubble on a face containing link edge e; face chosen as the first one found
MoveResult bubble(const HTriangulation& T, int e, const GColoring* c = nullptr,
                  std::mt19937_64* rng = nullptr);
// inverse of bubble at a vertex of the bubble pattern
MoveResult inverse_bubble(const HTriangulation& T, int vertex_id, const GColoring* c = nullptr);
// 2-3 move on the interior face f of tetrahedron t
MoveResult pachner23(const HTriangulation& T, int t, int f, const GColoring* c = nullptr);
// 3-2 move on an edge of degree three
MoveResult pachner32(const HTriangulation& T, int e, const GColoring* c = nullptr);
// lune (0-2) move on faces f1, f2 of tetrahedron t
MoveResult lune(const HTriangulation& T, int t, int f1, int f2, const GColoring* c = nullptr);

// canonical string of the combinatorial data, equal for isomorphic complexes
std::string iso_signature(const HTriangulation& T);

// ---------------------------------------------------------------- files

struct TriangulationFile {
    HTriangulation T;
    std::optional<GColoring> coloring;
};

TriangulationFile parse_triangulation_json(const std::string& text);
std::string triangulation_to_json(const HTriangulation& T, const GColoring* c = nullptr);

} // namespace qtv
