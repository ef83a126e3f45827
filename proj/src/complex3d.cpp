#include <qtv/complex3d.hpp>
#include <qtv/weightcat.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <tuple>
#include <numeric>
#include <set>
#include <sstream>

namespace qtv {

namespace {

constexpr int kEdge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int perm_parity(std::vector<int> p) {
    int s = 1;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// face slots of face f in increasing order
std::array<int, 3> face_slots(int f) {
    std::array<int, 3> s{};
    int n = 0;
    for (int a = 0; a < 4; ++a)
        if (a != f) s[size_t(n++)] = a;
    return s;
}

struct ParityDSU {
    std::vector<int> parent, par;
    explicit ParityDSU(int n) : parent(size_t(n)), par(size_t(n), 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::pair<int, int> find(int x) {
        if (parent[size_t(x)] == x) return {x, 0};
        auto [r, p] = find(parent[size_t(x)]);
        parent[size_t(x)] = r;
        par[size_t(x)] ^= p;
        return {r, par[size_t(x)]};
    }
    // returns false on a parity conflict
    bool unite(int x, int y, int p) {
        auto [rx, px] = find(x);
        auto [ry, py] = find(y);
        if (rx == ry) return (px ^ py) == p;
        parent[size_t(rx)] = ry;
        par[size_t(rx)] = px ^ py ^ p;
        return true;
    }
};

} // namespace

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int i = 0; i < 6; ++i)
        if (kEdge[i][0] == a && kEdge[i][1] == b) return i;
    throw Error(ErrorKind::InvalidInput, "bad edge slot");
}

std::array<int, 2> edge_slots(int idx) { return {kEdge[idx][0], kEdge[idx][1]}; }

// ---------------------------------------------------------------- structure

HTriangulation::HTriangulation(std::vector<Tet> tets, std::vector<Gluing> gluings)
    : tets_(std::move(tets)), gluings_(std::move(gluings)) {
    build();
}

void HTriangulation::build() {
    const int T = n_tets();
    nb_.assign(size_t(T), {});
    perm_.assign(size_t(T), {});
    for (auto& row : nb_) row.fill({-1, -1});
    for (const auto& g : gluings_) {
        if (g.tet < 0 || g.tet >= T || g.to_tet < 0 || g.to_tet >= T || g.face < 0 || g.face > 3 ||
            g.to_face < 0 || g.to_face > 3)
            throw Error(ErrorKind::InvalidInput, "gluing refers to a missing tetrahedron or face");
        std::array<int, 4> p = g.perm, sorted = g.perm;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != std::array<int, 4>{0, 1, 2, 3} || p[size_t(g.face)] != g.to_face)
            throw Error(ErrorKind::InvalidInput, "gluing permutation must be a bijection sending face to to_face");
        if (g.tet == g.to_tet && g.face == g.to_face)
            throw Error(ErrorKind::InvalidInput, "face glued to itself");
        if (nb_[size_t(g.tet)][size_t(g.face)].first >= 0 || nb_[size_t(g.to_tet)][size_t(g.to_face)].first >= 0)
            throw Error(ErrorKind::InvalidInput, "face of tetrahedron " + std::to_string(g.tet) + " glued twice");
        std::array<int, 4> inv{};
        for (int a = 0; a < 4; ++a) inv[size_t(p[size_t(a)])] = a;
        nb_[size_t(g.tet)][size_t(g.face)] = {g.to_tet, g.to_face};
        nb_[size_t(g.to_tet)][size_t(g.to_face)] = {g.tet, g.face};
        perm_[size_t(g.tet)][size_t(g.face)] = p;
        perm_[size_t(g.to_tet)][size_t(g.to_face)] = inv;
    }

    std::set<int> ids;
    for (const auto& t : tets_) ids.insert(t.v.begin(), t.v.end());
    vertex_ids_.assign(ids.begin(), ids.end());

    ParityDSU dsu(6 * T);
    for (const auto& g : gluings_) {
        const auto fs = face_slots(g.face);
        for (int x = 0; x < 3; ++x)
            for (int y = x + 1; y < 3; ++y) {
                int a = fs[size_t(x)], b = fs[size_t(y)];
                int pa = g.perm[size_t(a)], pb = g.perm[size_t(b)];
                if (!dsu.unite(6 * g.tet + edge_index(a, b), 6 * g.to_tet + edge_index(pa, pb), pa < pb ? 0 : 1))
                    throw Error(ErrorKind::InvalidInput, "an edge is glued to itself with reversed orientation");
            }
    }
    slot_edge_.assign(size_t(T), {});
    edge_ends_.clear();
    std::map<int, std::pair<int, int>> root_class; // root -> (class, parity of representative)
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < 6; ++i) {
            auto [root, p] = dsu.find(6 * t + i);
            auto it = root_class.find(root);
            if (it == root_class.end()) {
                it = root_class.emplace(root, std::make_pair(int(edge_ends_.size()), p)).first;
                edge_ends_.emplace_back(tets_[size_t(t)].v[size_t(kEdge[i][0])], tets_[size_t(t)].v[size_t(kEdge[i][1])]);
            }
            slot_edge_[size_t(t)][size_t(i)] = {it->second.first, p == it->second.second ? 1 : -1};
        }
}

std::pair<int, int> HTriangulation::edge_of(int tet, int a, int b) const {
    auto [e, s] = slot_edge_.at(size_t(tet))[size_t(edge_index(a, b))];
    return {e, a < b ? s : -s};
}

std::vector<EdgeSlot> HTriangulation::edge_slots_of(int e) const {
    std::vector<EdgeSlot> out;
    for (int t = 0; t < n_tets(); ++t)
        for (int i = 0; i < 6; ++i)
            if (slot_edge_[size_t(t)][size_t(i)].first == e) {
                int s = slot_edge_[size_t(t)][size_t(i)].second;
                out.push_back(s > 0 ? EdgeSlot{t, kEdge[i][0], kEdge[i][1]} : EdgeSlot{t, kEdge[i][1], kEdge[i][0]});
            }
    return out;
}

std::vector<int> HTriangulation::edges_between(int u, int v) const {
    std::vector<int> out;
    for (int e = 0; e < n_edges(); ++e) {
        auto [a, b] = edge_ends_[size_t(e)];
        if ((a == u && b == v) || (a == v && b == u)) out.push_back(e);
    }
    return out;
}

bool HTriangulation::in_Y(int e) const { return std::find(Y.begin(), Y.end(), e) != Y.end(); }

std::string ValidationReport::summary() const {
    if (issues.empty()) return "valid (euler characteristic " + std::to_string(euler) + ")";
    std::string s;
    for (const auto& i : issues) s += i + "\n";
    return s;
}

ValidationReport validate(const HTriangulation& T) {
    ValidationReport rep;
    auto issue = [&](const std::string& s) { rep.issues.push_back(s); };
    const int nt = T.n_tets();
    for (int t = 0; t < nt; ++t) {
        const auto& v = T.tets()[size_t(t)].v;
        std::set<int> s(v.begin(), v.end());
        if (s.size() != 4) issue("tetrahedron " + std::to_string(t) + ": repeated vertex (quasi-regularity)");
        if (std::abs(T.tets()[size_t(t)].sign) != 1) issue("tetrahedron " + std::to_string(t) + ": sign must be +1 or -1");
    }
    for (const auto& g : T.gluings()) {
        const auto& a = T.tets()[size_t(g.tet)];
        const auto& b = T.tets()[size_t(g.to_tet)];
        std::string where = "gluing " + std::to_string(g.tet) + ":" + std::to_string(g.face) + " -> " +
                            std::to_string(g.to_tet) + ":" + std::to_string(g.to_face);
        for (int s : face_slots(g.face))
            if (a.v[size_t(s)] != b.v[size_t(g.perm[size_t(s)])]) {
                issue(where + ": vertex ids do not match across the gluing");
                break;
            }
        std::vector<int> img;
        for (int s : face_slots(g.face)) img.push_back(g.perm[size_t(s)]);
        int lhs = a.sign * ((g.face % 2) ? -1 : 1);
        int rhs = -b.sign * ((g.to_face % 2) ? -1 : 1) * perm_parity(img);
        if (lhs != rhs) issue(where + ": gluing preserves orientation");
    }
    for (int e = 0; e < T.n_edges(); ++e) {
        auto [u, v] = T.edge_ends(e);
        if (u == v) issue("edge " + std::to_string(e) + ": endpoints coincide (quasi-regularity)");
    }
    // vertex identifications from gluings must match the ids
    {
        const int n = 4 * nt;
        std::vector<int> parent(static_cast<size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[size_t(x)] == x ? x : parent[size_t(x)] = find(parent[size_t(x)]); };
        for (const auto& g : T.gluings())
            for (int s : face_slots(g.face)) parent[size_t(find(4 * g.tet + s))] = find(4 * g.to_tet + g.perm[size_t(s)]);
        std::map<int, int> id_root;
        for (int t = 0; t < nt; ++t)
            for (int s = 0; s < 4; ++s) {
                int id = T.tets()[size_t(t)].v[size_t(s)], r = find(4 * t + s);
                auto [it, fresh] = id_root.emplace(id, r);
                if (!fresh && it->second != r)
                    issue("vertex id " + std::to_string(id) + " names two distinct vertices of the complex");
            }
    }
    if (!T.closed())
        issue("complex has " + std::to_string(4 * nt - 2 * int(T.gluings().size())) + " boundary faces");
    rep.euler = T.euler();
    if (T.closed() && rep.euler != 0) issue("euler characteristic " + std::to_string(rep.euler) + " != 0");
    // link conditions: every vertex on the link, link a union of circles
    if (!T.Y.empty()) {
        std::map<int, int> deg;
        for (int e : T.Y) {
            if (e < 0 || e >= T.n_edges()) {
                issue("link edge " + std::to_string(e) + " out of range");
                continue;
            }
            auto [u, v] = T.edge_ends(e);
            ++deg[u], ++deg[v];
        }
        for (int id : T.vertex_ids()) {
            if (!deg.count(id)) issue("vertex " + std::to_string(id) + " is not on the link");
            else if (deg[id] != 2) issue("vertex " + std::to_string(id) + " has link degree " + std::to_string(deg[id]));
        }
    }
    return rep;
}

// ---------------------------------------------------------------- colorings

double GColoring::on(const HTriangulation& T, int tet, int a, int b) const {
    auto [e, s] = T.edge_of(tet, a, b);
    return s > 0 ? phi[size_t(e)] : frac(-phi[size_t(e)]);
}

bool color_check(const HTriangulation& T, const GColoring& c, double eps) {
    if (int(c.phi.size()) != T.n_edges()) return false;
    for (int t = 0; t < T.n_tets(); ++t)
        for (int f = 0; f < 4; ++f) {
            auto s = face_slots(f);
            double sum = c.on(T, t, s[0], s[1]) + c.on(T, t, s[1], s[2]) + c.on(T, t, s[2], s[0]);
            if (lattice_dist(sum, 1.0) > eps) return false;
        }
    return true;
}

bool is_admissible(const GColoring& c, double eps_adm) {
    for (double x : c.phi)
        if (lattice_dist(x, 0.5) < eps_adm) return false;
    return true;
}

GColoring gauge_act(const HTriangulation& T, const Gauge& g, const GColoring& c) {
    auto val = [&](int id) {
        auto it = g.find(id);
        return it == g.end() ? 0.0 : it->second;
    };
    GColoring out = c;
    for (int e = 0; e < T.n_edges(); ++e) {
        auto [u, v] = T.edge_ends(e);
        out.phi[size_t(e)] = frac(val(u) + c.phi[size_t(e)] - val(v));
    }
    return out;
}

GColoring coloring_from_potential(const HTriangulation& T, const Gauge& f) {
    GColoring zero{std::vector<double>(size_t(T.n_edges()), 0.0)};
    return gauge_act(T, f, zero);
}

GColoring make_admissible(const HTriangulation& T, const GColoring& c, std::mt19937_64& rng, double eps_adm) {
    if (!color_check(T, c)) throw Error(ErrorKind::InvalidInput, "not a valid coloring");
    GColoring out = c;
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto bad_at = [&](const GColoring& x, int id) {
        for (int e = 0; e < T.n_edges(); ++e) {
            auto [u, v] = T.edge_ends(e);
            if ((u == id || v == id) && lattice_dist(x.phi[size_t(e)], 0.5) < eps_adm) return true;
        }
        return false;
    };
    for (int id : T.vertex_ids()) {
        if (!bad_at(out, id)) continue;
        bool fixed = false;
        for (int attempt = 0; attempt < 1000 && !fixed; ++attempt) {
            GColoring y = gauge_act(T, {{id, U(rng)}}, out);
            if (!bad_at(y, id)) {
                out = y;
                fixed = true;
            }
        }
        if (!fixed) throw Error(ErrorKind::InvalidInput, "could not repair vertex " + std::to_string(id));
    }
    return out;
}

// ---------------------------------------------------------------- states

StateSpace::StateSpace(const RootData& rd, const HTriangulation& T, const GColoring& c) : r_(rd.r), count_(1) {
    for (int e = 0; e < T.n_edges(); ++e) {
        labels_.push_back(state_reps(rd, c.phi[size_t(e)]));
        if (count_ > (1LL << 50) / r_) throw Error(ErrorKind::InvalidInput, "too many states");
        count_ *= r_;
    }
}

std::vector<int> StateSpace::at(long long n) const {
    std::vector<int> s(labels_.size());
    for (auto& x : s) {
        x = int(n % r_);
        n /= r_;
    }
    return s;
}

// ---------------------------------------------------------------- moves

namespace {

struct FaceRef {
    int tet, face;
    bool operator<(const FaceRef& o) const { return std::tie(tet, face) < std::tie(o.tet, o.face); }
    bool operator==(const FaceRef& o) const = default;
};

std::set<int> face_ids(const Tet& t, int f) {
    std::set<int> s;
    for (int a : face_slots(f)) s.insert(t.v[size_t(a)]);
    return s;
}

Gluing glue_by_ids(const std::vector<Tet>& tets, int t, int f, int u, int g) {
    Gluing gl{t, f, u, g, {}};
    gl.perm[size_t(f)] = g;
    for (int a : face_slots(f)) {
        int id = tets[size_t(t)].v[size_t(a)];
        int hit = -1;
        for (int b = 0; b < 4; ++b)
            if (b != g && tets[size_t(u)].v[size_t(b)] == id) hit = b;
        if (hit < 0) throw Error(ErrorKind::PatternNotFound, "faces to glue carry different vertices");
        gl.perm[size_t(a)] = hit;
    }
    return gl;
}

// Local retriangulation: tetrahedra in `removed` are replaced by `added`.
// `pairs` lists face pairings among the new complex (indices into the
// concatenated list old-then-new); retained old gluings are kept unless a
// retained face appears in `pairs`.
struct Patch {
    std::vector<int> removed;
    std::vector<Tet> added;
    std::vector<std::pair<FaceRef, FaceRef>> pairs;
};

HTriangulation apply_patch(const HTriangulation& T, const Patch& P, std::vector<int>& old_to_new) {
    const int nt = T.n_tets();
    std::vector<Tet> all = T.tets();
    for (const auto& t : P.added) all.push_back(t);
    std::vector<bool> gone(all.size(), false);
    for (int t : P.removed) gone[size_t(t)] = true;

    std::set<FaceRef> rebound;
    for (const auto& [a, b] : P.pairs) rebound.insert(a), rebound.insert(b);
    std::vector<std::pair<FaceRef, FaceRef>> pairs;
    for (const auto& g : T.gluings()) {
        FaceRef a{g.tet, g.face}, b{g.to_tet, g.to_face};
        if (gone[size_t(g.tet)] || gone[size_t(g.to_tet)] || rebound.count(a) || rebound.count(b)) continue;
        pairs.emplace_back(a, b);
    }
    for (const auto& p : P.pairs) pairs.push_back(p);

    // orientation of new tetrahedra from glued neighbors
    std::vector<int> sign(all.size(), 0);
    for (int t = 0; t < nt; ++t) sign[size_t(t)] = T.tets()[size_t(t)].sign;
    for (size_t t = size_t(nt); t < all.size(); ++t) sign[t] = 0;
    auto induced = [&](const FaceRef& a, const FaceRef& b) {
        Gluing gl = glue_by_ids(all, a.tet, a.face, b.tet, b.face);
        std::vector<int> img;
        for (int s : face_slots(a.face)) img.push_back(gl.perm[size_t(s)]);
        // sign of b forced by sign of a
        return -sign[size_t(a.tet)] * ((a.face % 2) ? -1 : 1) * ((b.face % 2) ? -1 : 1) * perm_parity(img);
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [a, b] : pairs) {
            if (sign[size_t(a.tet)] != 0 && sign[size_t(b.tet)] == 0) sign[size_t(b.tet)] = induced(a, b), changed = true;
            else if (sign[size_t(b.tet)] != 0 && sign[size_t(a.tet)] == 0) sign[size_t(a.tet)] = induced(b, a), changed = true;
        }
    }
    for (size_t t = 0; t < all.size(); ++t) all[t].sign = sign[t] == 0 ? 1 : sign[t];

    old_to_new.assign(all.size(), -1);
    std::vector<Tet> kept;
    for (size_t t = 0; t < all.size(); ++t)
        if (!gone[t]) old_to_new[t] = int(kept.size()), kept.push_back(all[t]);
    std::vector<Gluing> gl;
    for (const auto& [a, b] : pairs) {
        if (gone[size_t(a.tet)] || gone[size_t(b.tet)]) throw Error(ErrorKind::PatternNotFound, "pairing with removed tetrahedron");
        gl.push_back(glue_by_ids(kept, old_to_new[size_t(a.tet)], a.face, old_to_new[size_t(b.tet)], b.face));
    }
    return HTriangulation(std::move(kept), std::move(gl));
}

// transport Y and the coloring along slots that survive the move; slots of
// removed tetrahedra are matched by vertex ids inside the added ones
struct Transport {
    std::vector<int> Y;
    std::optional<GColoring> coloring;
};

int find_by_ids(const HTriangulation& N, const std::vector<int>& candidates, int u, int v, int* sgn) {
    for (int t : candidates) {
        const auto& w = N.tets()[size_t(t)].v;
        int a = -1, b = -1;
        for (int s = 0; s < 4; ++s) {
            if (w[size_t(s)] == u) a = s;
            if (w[size_t(s)] == v) b = s;
        }
        if (a >= 0 && b >= 0) {
            auto [e, s] = N.edge_of(t, a, b);
            *sgn = s;
            return e;
        }
    }
    return -1;
}

void complete_coloring(const HTriangulation& N, std::vector<std::optional<double>>& phi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto val = [&](int t, int a, int b) -> std::optional<double> {
        auto [e, s] = N.edge_of(t, a, b);
        if (!phi[size_t(e)]) return std::nullopt;
        return s > 0 ? *phi[size_t(e)] : frac(-*phi[size_t(e)]);
    };
    auto set = [&](int t, int a, int b, double x) {
        auto [e, s] = N.edge_of(t, a, b);
        phi[size_t(e)] = s > 0 ? frac(x) : frac(-x);
    };
    for (;;) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int t = 0; t < N.n_tets(); ++t)
                for (int f = 0; f < 4; ++f) {
                    auto s = face_slots(f);
                    std::array<std::pair<int, int>, 3> es = {{{s[0], s[1]}, {s[1], s[2]}, {s[2], s[0]}}};
                    int unknown = -1, n_unknown = 0;
                    double sum = 0;
                    for (int k = 0; k < 3; ++k) {
                        auto x = val(t, es[size_t(k)].first, es[size_t(k)].second);
                        if (x) sum += *x;
                        else unknown = k, ++n_unknown;
                    }
                    if (n_unknown == 1) {
                        set(t, es[size_t(unknown)].first, es[size_t(unknown)].second, -sum);
                        changed = true;
                    }
                }
        }
        auto it = std::find_if(phi.begin(), phi.end(), [](const auto& x) { return !x; });
        if (it == phi.end()) return;
        *it = U(rng);
    }
}

MoveResult finish_move(const HTriangulation& T, HTriangulation N, const std::vector<int>& old_to_new,
                       const std::vector<int>& added_idx, const GColoring* c, std::vector<int> y_drop,
                       std::vector<EdgeSlot> y_add, std::mt19937_64* rng_in) {
    // Y by slots
    std::set<int> Y;
    std::vector<std::optional<double>> phi(static_cast<size_t>(N.n_edges()));
    auto map_slot = [&](int t, int a, int b, int* sgn) {
        if (old_to_new[size_t(t)] >= 0) {
            auto [e, s] = N.edge_of(old_to_new[size_t(t)], a, b);
            *sgn = s;
            return e;
        }
        const auto& w = T.tets()[size_t(t)].v;
        return find_by_ids(N, added_idx, w[size_t(a)], w[size_t(b)], sgn);
    };
    for (int t = 0; t < T.n_tets(); ++t)
        for (int i = 0; i < 6; ++i) {
            auto [a, b] = edge_slots(i);
            auto [oe, os] = T.edge_of(t, a, b);
            int ns = 1;
            int ne = map_slot(t, a, b, &ns);
            if (ne < 0) continue; // edge removed by the move
            if (T.in_Y(oe) && std::find(y_drop.begin(), y_drop.end(), ne) == y_drop.end()) Y.insert(ne);
            if (c) {
                double v = os > 0 ? c->phi[size_t(oe)] : frac(-c->phi[size_t(oe)]);
                phi[size_t(ne)] = ns > 0 ? v : frac(-v);
            }
        }
    for (const auto& s : y_add) Y.insert(N.edge_of(s.tet, s.a, s.b).first);
    N.Y.assign(Y.begin(), Y.end());
    MoveResult res{N, std::nullopt};
    if (c) {
        std::mt19937_64 local(0);
        std::mt19937_64& rng = rng_in ? *rng_in : local;
        for (int attempt = 0; attempt < 200; ++attempt) {
            auto trial = phi;
            complete_coloring(N, trial, rng);
            GColoring g;
            for (auto& x : trial) g.phi.push_back(*x);
            if (!color_check(N, g)) throw Error(ErrorKind::InvalidInput, "coloring does not extend over the move");
            if (is_admissible(g)) {
                res.coloring = g;
                break;
            }
            bool free = std::any_of(phi.begin(), phi.end(), [](const auto& x) { return !x; });
            if (!free) throw Error(ErrorKind::Inadmissible, "forced color on a new edge is not admissible");
        }
        if (!res.coloring) throw Error(ErrorKind::Inadmissible, "no admissible extension found");
    }
    auto rep = validate(res.T);
    if (!rep.ok()) {
        for (const auto& s : rep.issues)
            if (s.find("quasi-regularity") != std::string::npos) throw Error(ErrorKind::QuasiRegularity, s);
        throw Error(ErrorKind::InvalidInput, "move produced an invalid complex: " + rep.summary());
    }
    return res;
}

int slot_of(const Tet& t, int id) {
    for (int s = 0; s < 4; ++s)
        if (t.v[size_t(s)] == id) return s;
    return -1;
}

// id sets of the faces of removed tetrahedra glued to the outside, matched to
// faces of the added tetrahedra (ids of the patch are distinct)
void rebind_outer(const HTriangulation& T, Patch& P, int nt) {
    std::set<int> removed(P.removed.begin(), P.removed.end());
    auto new_face = [&](const std::set<int>& ids, int avoid_tet, int avoid_face) -> FaceRef {
        for (size_t k = 0; k < P.added.size(); ++k)
            for (int f = 0; f < 4; ++f)
                if (face_ids(P.added[k], f) == ids && !(int(k) + nt == avoid_tet && f == avoid_face))
                    return {nt + int(k), f};
        throw Error(ErrorKind::PatternNotFound, "no new face matches an outer face");
    };
    std::set<FaceRef> inner_used;
    // internal faces of the added set
    for (size_t k = 0; k < P.added.size(); ++k)
        for (int f = 0; f < 4; ++f)
            for (size_t m = k + 1; m < P.added.size(); ++m)
                for (int g = 0; g < 4; ++g)
                    if (face_ids(P.added[k], f) == face_ids(P.added[m], g)) {
                        FaceRef a{nt + int(k), f}, b{nt + int(m), g};
                        if (inner_used.count(a) || inner_used.count(b)) continue;
                        inner_used.insert(a), inner_used.insert(b);
                        P.pairs.emplace_back(a, b);
                    }
    std::set<FaceRef> done;
    for (int t : P.removed)
        for (int f = 0; f < 4; ++f) {
            auto [u, g] = T.neighbor(t, f);
            if (u < 0) throw Error(ErrorKind::PatternNotFound, "move touches the boundary");
            if (removed.count(u)) {
                if (done.count({t, f})) continue;
                // glued inside the patch; only relevant if the face survives
                std::set<int> ids = face_ids(T.tets()[size_t(t)], f);
                bool survives = false;
                for (const auto& a : P.added)
                    for (int h = 0; h < 4; ++h)
                        if (face_ids(a, h) == ids) survives = true;
                if (!survives) continue;
                FaceRef a = new_face(ids, -1, -1);
                if (inner_used.count(a)) continue;
                FaceRef b = new_face(face_ids(T.tets()[size_t(u)], g), a.tet, a.face);
                P.pairs.emplace_back(a, b);
                done.insert({u, g});
                continue;
            }
            FaceRef a = new_face(face_ids(T.tets()[size_t(t)], f), -1, -1);
            if (inner_used.count(a)) throw Error(ErrorKind::PatternNotFound, "outer face collides with an inner face");
            P.pairs.emplace_back(a, FaceRef{u, g});
        }
}

} // namespace

MoveResult bubble(const HTriangulation& T, int e, const GColoring* c, std::mt19937_64* rng) {
    if (!T.in_Y(e)) throw Error(ErrorKind::PatternNotFound, "bubble needs a link edge");
    auto slots = T.edge_slots_of(e);
    int t = -1, f = -1;
    for (const auto& s : slots) {
        for (int ff = 0; ff < 4 && t < 0; ++ff)
            if (ff != s.a && ff != s.b && T.neighbor(s.tet, ff).first >= 0) t = s.tet, f = ff;
        if (t >= 0) break;
    }
    if (t < 0) throw Error(ErrorKind::PatternNotFound, "no interior face on the link edge");
    auto [u, g] = T.neighbor(t, f);
    const Tet& tt = T.tets()[size_t(t)];
    auto fs = face_slots(f);
    int v = *std::max_element(T.vertex_ids().begin(), T.vertex_ids().end()) + 1;
    const int nt = T.n_tets();
    Patch P;
    Tet b{{v, tt.v[size_t(fs[0])], tt.v[size_t(fs[1])], tt.v[size_t(fs[2])]}, 1};
    P.added = {b, b};
    P.pairs.push_back({{t, f}, {nt, 0}});
    P.pairs.push_back({{u, g}, {nt + 1, 0}});
    for (int k = 1; k < 4; ++k) P.pairs.push_back({{nt, k}, {nt + 1, k}});
    std::vector<int> o2n;
    HTriangulation N = apply_patch(T, P, o2n);
    auto [ea, eb] = T.edge_ends(e);
    // the old link edge leaves Y; the path a - v - b joins it
    int sa = slot_of(tt, ea), sb = slot_of(tt, eb);
    int old_new = N.edge_of(o2n[size_t(t)], sa, sb).first;
    int n1 = o2n[size_t(nt)];
    auto slot_in_new = [&](int id) { return slot_of(N.tets()[size_t(n1)], id); };
    std::vector<EdgeSlot> add = {{n1, 0, slot_in_new(ea)}, {n1, 0, slot_in_new(eb)}};
    return finish_move(T, N, o2n, {n1, o2n[size_t(nt + 1)]}, c, {old_new}, add, rng);
}

MoveResult inverse_bubble(const HTriangulation& T, int vid, const GColoring* c) {
    std::vector<int> around;
    for (int t = 0; t < T.n_tets(); ++t)
        if (slot_of(T.tets()[size_t(t)], vid) >= 0) around.push_back(t);
    if (around.size() != 2) throw Error(ErrorKind::PatternNotFound, "vertex is not the apex of a bubble");
    int t1 = around[0], t2 = around[1];
    const Tet &A = T.tets()[size_t(t1)], &B = T.tets()[size_t(t2)];
    std::set<int> sa(A.v.begin(), A.v.end()), sb(B.v.begin(), B.v.end());
    if (sa != sb) throw Error(ErrorKind::PatternNotFound, "bubble tetrahedra differ");
    int s1 = slot_of(A, vid), s2 = slot_of(B, vid);
    for (int f = 0; f < 4; ++f)
        if (f != s1 && T.neighbor(t1, f).first != t2) throw Error(ErrorKind::PatternNotFound, "bubble faces not paired");
    auto o1 = T.neighbor(t1, s1), o2 = T.neighbor(t2, s2);
    if (o1.first < 0 || o2.first < 0 || o1.first == t2) throw Error(ErrorKind::PatternNotFound, "bubble is not embedded");
    std::vector<int> link_nb;
    for (int e : T.Y) {
        auto [x, y] = T.edge_ends(e);
        if (x == vid) link_nb.push_back(y);
        if (y == vid) link_nb.push_back(x);
    }
    if (link_nb.size() != 2) throw Error(ErrorKind::PatternNotFound, "apex is not a link vertex of degree two");
    Patch P;
    P.removed = {t1, t2};
    P.pairs.push_back({{o1.first, o1.second}, {o2.first, o2.second}});
    std::vector<int> o2n;
    HTriangulation N = apply_patch(T, P, o2n);
    // link edge a-b: the edge of the closing face
    int a = link_nb[0], b = link_nb[1];
    const Tet& O = T.tets()[size_t(o1.first)];
    int sa_ = slot_of(O, a), sb_ = slot_of(O, b);
    if (sa_ < 0 || sb_ < 0) throw Error(ErrorKind::PatternNotFound, "closing face misses the link edge");
    return finish_move(T, N, o2n, {}, c, {}, {{o2n[size_t(o1.first)], sa_, sb_}}, nullptr);
}

MoveResult pachner23(const HTriangulation& T, int t, int f, const GColoring* c) {
    auto [u, g] = T.neighbor(t, f);
    if (u < 0) throw Error(ErrorKind::PatternNotFound, "face is on the boundary");
    if (u == t) throw Error(ErrorKind::PatternNotFound, "face glued to its own tetrahedron");
    const Tet &A = T.tets()[size_t(t)], &B = T.tets()[size_t(u)];
    int d = A.v[size_t(f)], e = B.v[size_t(g)];
    if (d == e) throw Error(ErrorKind::QuasiRegularity, "new edge would join vertex " + std::to_string(d) + " to itself");
    auto fs = face_slots(f);
    int a = A.v[size_t(fs[0])], b = A.v[size_t(fs[1])], cc = A.v[size_t(fs[2])];
    Patch P;
    P.removed = {t, u};
    P.added = {Tet{{a, b, d, e}, 1}, Tet{{b, cc, d, e}, 1}, Tet{{cc, a, d, e}, 1}};
    rebind_outer(T, P, T.n_tets());
    std::vector<int> o2n;
    HTriangulation N = apply_patch(T, P, o2n);
    const int nt = T.n_tets();
    return finish_move(T, N, o2n, {o2n[size_t(nt)], o2n[size_t(nt + 1)], o2n[size_t(nt + 2)]}, c, {}, {}, nullptr);
}

MoveResult pachner32(const HTriangulation& T, int e, const GColoring* c) {
    if (T.in_Y(e)) throw Error(ErrorKind::PatternNotFound, "3-2 move on a link edge");
    auto slots = T.edge_slots_of(e);
    if (slots.size() != 3) throw Error(ErrorKind::PatternNotFound, "edge does not have degree three");
    std::set<int> tt;
    for (const auto& s : slots) tt.insert(s.tet);
    if (tt.size() != 3) throw Error(ErrorKind::PatternNotFound, "edge meets a tetrahedron twice");
    auto [d, ee] = T.edge_ends(e);
    std::set<int> others;
    for (int t : tt)
        for (int id : T.tets()[size_t(t)].v)
            if (id != d && id != ee) others.insert(id);
    if (others.size() != 3) throw Error(ErrorKind::PatternNotFound, "edge link is not a triangle");
    std::vector<int> o(others.begin(), others.end());
    Patch P;
    P.removed.assign(tt.begin(), tt.end());
    P.added = {Tet{{o[0], o[1], o[2], d}, 1}, Tet{{o[0], o[1], o[2], ee}, 1}};
    rebind_outer(T, P, T.n_tets());
    std::vector<int> o2n;
    HTriangulation N = apply_patch(T, P, o2n);
    const int nt = T.n_tets();
    return finish_move(T, N, o2n, {o2n[size_t(nt)], o2n[size_t(nt + 1)]}, c, {}, {}, nullptr);
}

MoveResult lune(const HTriangulation& T, int t, int f1, int f2, const GColoring* c) {
    if (f1 == f2 || f1 < 0 || f2 < 0 || f1 > 3 || f2 > 3) throw Error(ErrorKind::PatternNotFound, "lune needs two faces");
    auto n1 = T.neighbor(t, f1), n2 = T.neighbor(t, f2);
    if (n1.first < 0 || n2.first < 0) throw Error(ErrorKind::PatternNotFound, "face is on the boundary");
    if (n1 == std::make_pair(t, f2)) throw Error(ErrorKind::PatternNotFound, "the two faces are glued to each other");
    const Tet& A = T.tets()[size_t(t)];
    std::vector<int> xy;
    for (int s = 0; s < 4; ++s)
        if (s != f1 && s != f2) xy.push_back(A.v[size_t(s)]);
    int x = xy[0], y = xy[1], z = A.v[size_t(f2)], w = A.v[size_t(f1)];
    const int nt = T.n_tets();
    Patch P;
    P.added = {Tet{{x, y, z, w}, 1}, Tet{{x, y, z, w}, 1}};
    P.pairs.push_back({{t, f1}, {nt, 3}});
    P.pairs.push_back({{t, f2}, {nt, 2}});
    P.pairs.push_back({{n1.first, n1.second}, {nt + 1, 3}});
    P.pairs.push_back({{n2.first, n2.second}, {nt + 1, 2}});
    P.pairs.push_back({{nt, 0}, {nt + 1, 0}});
    P.pairs.push_back({{nt, 1}, {nt + 1, 1}});
    std::vector<int> o2n;
    HTriangulation N = apply_patch(T, P, o2n);
    // a link edge x-y keeps its outer copy only
    std::vector<int> drop;
    auto [oe, os] = T.edge_of(t, slot_of(A, x), slot_of(A, y));
    (void)os;
    if (T.in_Y(oe)) drop.push_back(N.edge_of(o2n[size_t(t)], slot_of(A, x), slot_of(A, y)).first);
    return finish_move(T, N, o2n, {o2n[size_t(nt)], o2n[size_t(nt + 1)]}, c, drop, {}, nullptr);
}

// ---------------------------------------------------------------- isomorphism

std::string iso_signature(const HTriangulation& T) {
    std::array<std::array<int, 4>, 24> perms{};
    {
        std::array<int, 4> p{0, 1, 2, 3};
        int n = 0;
        do perms[size_t(n++)] = p;
        while (std::next_permutation(p.begin(), p.end()));
    }
    std::string best;
    const int nt = T.n_tets();
    for (int t0 = 0; t0 < nt; ++t0)
        for (const auto& p0 : perms) {
            std::vector<int> label(size_t(nt), -1);
            std::vector<std::array<int, 4>> sig(static_cast<size_t>(nt)); // new slot -> old slot
            std::vector<int> order;
            label[size_t(t0)] = 0, sig[size_t(t0)] = p0, order.push_back(t0);
            std::ostringstream os;
            for (size_t q = 0; q < order.size(); ++q) {
                int t = order[q];
                const auto& s = sig[size_t(t)];
                std::vector<int> sv(s.begin(), s.end());
                os << 'o' << T.tets()[size_t(t)].sign * perm_parity(sv);
                for (int k = 0; k < 4; ++k) {
                    int f = s[size_t(k)];
                    auto [u, g] = T.neighbor(t, f);
                    if (u < 0) {
                        os << "|b";
                        continue;
                    }
                    const auto& pm = T.perm(t, f);
                    if (label[size_t(u)] < 0) {
                        std::array<int, 4> su{};
                        for (int m = 0; m < 4; ++m) su[size_t(m)] = pm[size_t(s[size_t(m)])];
                        label[size_t(u)] = int(order.size());
                        sig[size_t(u)] = su;
                        order.push_back(u);
                    }
                    const auto& su = sig[size_t(u)];
                    os << '|' << label[size_t(u)] << ':';
                    for (int m = 0; m < 4; ++m) {
                        int img = pm[size_t(s[size_t(m)])];
                        int inv = int(std::find(su.begin(), su.end(), img) - su.begin());
                        os << inv;
                    }
                }
                os << "|y";
                for (int i = 0; i < 6; ++i) {
                    auto [a, b] = edge_slots(i);
                    os << (T.in_Y(T.edge_of(t, s[size_t(a)], s[size_t(b)]).first) ? '1' : '0');
                }
                os << ';';
            }
            if (int(order.size()) != nt) os << "disconnected";
            std::string str = os.str();
            if (best.empty() || str < best) best = str;
        }
    return best;
}

} // namespace qtv
