#include <qtv/statesum.hpp>
#include <qtv/weightcat.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace qtv {

namespace {

constexpr int kEdge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

void parallel_for(long long n, int threads, const std::function<void(long long)>& f) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (long long k = 0; k < n; ++k) f(k);
        return;
    }
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            try {
                for (long long k; (k = next.fetch_add(1)) < n;) f(k);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next = n;
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// factor index of the face opposite slot f in a tensor read in order p
int factor_of_face(const std::array<int, 4>& p, int f) {
    if (f == p[2]) return 0;
    if (f == p[0]) return 1;
    if (f == p[3]) return 2;
    return 3;
}

// a product of per-edge weights, per-tet tables and per-face tables
struct Table {
    std::vector<int> cls; // edge classes, first one fastest in the index
    std::vector<Scalar> val;
};

struct Product {
    int r = 3;
    std::vector<std::vector<Scalar>> edge_w; // [class][idx]
    std::vector<Table> tables;
};

Scalar product_sum(const Product& P, long long count, int threads) {
    const int r = P.r;
    const int ne = int(P.edge_w.size());
    auto chunk_sum = [&](long long lo, long long hi) {
        std::vector<int> s(static_cast<size_t>(ne));
        long long n = lo;
        for (auto& x : s) x = int(n % r), n /= r;
        Scalar acc = 0;
        for (long long k = lo; k < hi; ++k) {
            Scalar term = 1;
            for (int e = 0; e < ne; ++e) term *= P.edge_w[size_t(e)][size_t(s[size_t(e)])];
            for (const auto& t : P.tables) {
                long long idx = 0;
                for (auto it = t.cls.rbegin(); it != t.cls.rend(); ++it) idx = idx * r + s[size_t(*it)];
                term *= t.val[size_t(idx)];
                if (term == Scalar(0)) break;
            }
            acc += term;
            for (int e = 0; e < ne; ++e) {
                if (++s[size_t(e)] < r) break;
                s[size_t(e)] = 0;
            }
        }
        return acc;
    };
    return deterministic_sum(count, chunk_sum, threads);
}

long long ipow(int r, int k) {
    long long x = 1;
    while (k-- > 0) x *= r;
    return x;
}

Scalar oriented_label(const SixJEngine& E, const HTriangulation& T, const StateSpace& S, int t, int a, int b, int idx_of_class) {
    auto [e, s] = T.edge_of(t, a, b);
    (void)e;
    Scalar x = S.label(T.edge_of(t, a, b).first, idx_of_class);
    return s > 0 ? E.canon(x) : E.star(x);
}

// 6j table of tetrahedron t over its six edge classes (slot edge order)
Table tet_table(SixJEngine& E, const HTriangulation& T, const StateSpace& S, int t, int threads) {
    const int r = E.root().r;
    Table tab;
    for (const auto& ed : kEdge) tab.cls.push_back(T.edge_of(t, ed[0], ed[1]).first);
    tab.val.assign(size_t(ipow(r, 6)), 0);
    const auto p = positive_order(T, t);
    parallel_for(ipow(r, 6), threads, [&](long long n) {
        int idx[6];
        long long m = n;
        for (int &x : idx) x = int(m % r), m /= r;
        auto lab = [&](int a, int b) {
            int k = edge_index(p[size_t(a)], p[size_t(b)]);
            return oriented_label(E, T, S, t, p[size_t(a)], p[size_t(b)], idx[k]);
        };
        tab.val[size_t(n)] = E.sixj(lab(1, 0), lab(2, 1), lab(2, 0), lab(3, 2), lab(3, 0), lab(3, 1));
    });
    return tab;
}

// factor triple of the face opposite slot f of t, as it appears in the 6j tensor
Triple face_triple(SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state, int t, int f) {
    const auto p = positive_order(T, t);
    auto lab = [&](int a, int b) {
        return oriented_label(E, T, S, t, p[size_t(a)], p[size_t(b)], state[size_t(T.edge_of(t, p[size_t(a)], p[size_t(b)]).first)]);
    };
    Scalar i = lab(1, 0), j = lab(2, 1), k = lab(2, 0), l = lab(3, 2), m = lab(3, 0), n = lab(3, 1);
    switch (factor_of_face(p, f)) {
    case 0: return {m, E.star(n), E.star(i)};
    case 1: return {n, E.star(l), E.star(j)};
    case 2: return {i, j, E.star(k)};
    default: return {k, l, E.star(m)};
    }
}

// 1/theta table of each glued face pair, with an optional extra weight per state
std::vector<Table> face_tables(SixJEngine& E, const HTriangulation& T, const StateSpace& S, int threads,
                               const std::function<Scalar(int, const std::vector<int>&)>& extra = nullptr) {
    const int r = E.root().r;
    std::vector<Table> out;
    for (size_t gi = 0; gi < T.gluings().size(); ++gi) {
        const auto& g = T.gluings()[gi];
        Table tab;
        auto fs = std::array<int, 3>{};
        for (int a = 0, n = 0; a < 4; ++a)
            if (a != g.face) fs[size_t(n++)] = a;
        tab.cls = {T.edge_of(g.tet, fs[0], fs[1]).first, T.edge_of(g.tet, fs[1], fs[2]).first,
                   T.edge_of(g.tet, fs[0], fs[2]).first};
        tab.val.assign(size_t(ipow(r, 3)), 0);
        parallel_for(ipow(r, 3), threads, [&](long long n) {
            std::vector<int> state(static_cast<size_t>(S.n_edges()), 0);
            long long m = n;
            for (int c : tab.cls) state[size_t(c)] = int(m % r), m /= r;
            Triple x = face_triple(E, T, S, state, g.tet, g.face);
            Triple y = face_triple(E, T, S, state, g.to_tet, g.to_face);
            if (!E.same_class(y, E.dual_triple(x)))
                throw Error(ErrorKind::Plan, "glued faces carry unmatched multiplicity spaces");
            Scalar th = E.theta(x[0], x[1], x[2]);
            Scalar v = th == Scalar(0) ? Scalar(0) : 1.0 / th;
            if (extra) v *= extra(int(gi), state);
            tab.val[size_t(n)] = v;
        });
        out.push_back(std::move(tab));
    }
    return out;
}

void require_closed_admissible(const HTriangulation& T, const GColoring& c) {
    if (!T.closed()) throw Error(ErrorKind::InvalidInput, "state sums need a closed complex");
    if (!color_check(T, c)) throw Error(ErrorKind::InvalidInput, "coloring violates the face condition");
    if (!is_admissible(c)) throw Error(ErrorKind::Inadmissible, "coloring is not admissible");
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

std::array<int, 4> positive_order(const HTriangulation& T, int t) {
    return T.tets().at(size_t(t)).sign > 0 ? std::array<int, 4>{0, 1, 2, 3} : std::array<int, 4>{1, 0, 2, 3};
}

Scalar slot_label(const SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state,
                  int t, int a, int b) {
    return oriented_label(E, T, S, t, a, b, state.at(size_t(T.edge_of(t, a, b).first)));
}

MultTensor tet_tensor(SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state, int t,
                      const std::array<int, 4>& order) {
    std::vector<int> perm(order.begin(), order.end());
    int par = 1;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (perm[size_t(a)] > perm[size_t(b)]) par = -par;
    if (par * T.tets().at(size_t(t)).sign < 0) throw Error(ErrorKind::InvalidInput, "vertex order is not positively oriented");
    auto lab = [&](int a, int b) { return slot_label(E, T, S, state, t, order[size_t(a)], order[size_t(b)]); };
    return E.sixj_tensor(lab(1, 0), lab(2, 1), lab(2, 0), lab(3, 2), lab(3, 0), lab(3, 1));
}

Scalar deterministic_sum(long long n, const std::function<Scalar(long long, long long)>& chunk_sum, int threads,
                         long long chunk) {
    if (n <= 0) return 0;
    const long long nchunks = (n + chunk - 1) / chunk;
    std::vector<Scalar> part(static_cast<size_t>(nchunks));
    parallel_for(nchunks, threads, [&](long long k) { part[size_t(k)] = chunk_sum(k * chunk, std::min(n, (k + 1) * chunk)); });
    while (part.size() > 1) {
        std::vector<Scalar> next((part.size() + 1) / 2);
        for (size_t k = 0; k < next.size(); ++k) next[k] = part[2 * k] + (2 * k + 1 < part.size() ? part[2 * k + 1] : Scalar(0));
        part.swap(next);
    }
    return part[0];
}

SumResult tv_sum(SixJEngine& E, const HTriangulation& T, const GColoring& c, const SumOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    require_closed_admissible(T, c);
    StateSpace S(E.root(), T, c);
    if (S.count() > opt.max_states) throw Error(ErrorKind::InvalidInput, "state space too large");
    Product P;
    P.r = E.root().r;
    for (int e = 0; e < T.n_edges(); ++e) {
        std::vector<Scalar> w;
        for (int k = 0; k < P.r; ++k) w.push_back(T.in_Y(e) ? E.b() : E.d(S.label(e, k)));
        P.edge_w.push_back(w);
    }
    for (int t = 0; t < T.n_tets(); ++t) P.tables.push_back(tet_table(E, T, S, t, opt.threads));
    for (auto& f : face_tables(E, T, S, opt.threads)) P.tables.push_back(std::move(f));
    SumResult res;
    res.value = product_sum(P, S.count(), opt.threads);
    res.states = S.count();
    res.runtime_ms = ms_since(t0);
    return res;
}

Scalar tv_state_term(SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state) {
    std::vector<MultTensor> ts;
    for (int t = 0; t < T.n_tets(); ++t) ts.push_back(tet_tensor(E, T, S, state, t, positive_order(T, t)));
    std::vector<PairStep> plan;
    for (const auto& g : T.gluings())
        plan.push_back({g.tet, factor_of_face(positive_order(T, g.tet), g.face), g.to_tet,
                        factor_of_face(positive_order(T, g.to_tet), g.to_face)});
    Scalar v = E.contract(ts, plan).value;
    for (int e = 0; e < T.n_edges(); ++e) v *= T.in_Y(e) ? E.b() : E.d(S.label(e, state[size_t(e)]));
    return v;
}

// ---------------------------------------------------------------- Kashaev

Scalar sqrt_d(const SixJEngine& E, Scalar a, unsigned sign_seed) {
    Scalar x = E.canon(a), y = E.star(a);
    auto q = [](Scalar z) { return std::make_pair(std::llround(z.real() * 1e6), std::llround(z.imag() * 1e6)); };
    auto rep = std::min(q(x), q(y));
    Scalar root = std::sqrt(E.d(rep == q(x) ? x : y));
    if (sign_seed == 0) return root;
    uint64_t h = uint64_t(rep.first) * 0x9E3779B97F4A7C15ULL ^ uint64_t(rep.second) * 0xC2B2AE3D27D4EB4FULL ^ sign_seed;
    h ^= h >> 31;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 29;
    return (h & 1) ? -root : root;
}

SumResult kashaev_sum(SixJEngine& E, const HTriangulation& T, const GColoring& c, const Charge& ch, const KashaevOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    require_closed_admissible(T, c);
    if (T.Y.empty()) throw Error(ErrorKind::InvalidInput, "Kashaev sum needs a nonempty link");
    if (auto why = charge_violation(T, ch); !why.empty()) throw Error(ErrorKind::InvalidInput, "invalid charge: " + why);
    std::map<int, int> rank;
    if (opt.vertex_order.empty()) {
        for (int id : T.vertex_ids()) rank[id] = int(rank.size());
    } else {
        for (int id : opt.vertex_order) rank[id] = int(rank.size());
        for (int id : T.vertex_ids())
            if (!rank.count(id)) throw Error(ErrorKind::InvalidInput, "vertex order misses vertex " + std::to_string(id));
    }
    StateSpace S(E.root(), T, c);
    if (S.count() > opt.sum.max_states) throw Error(ErrorKind::InvalidInput, "state space too large");
    const int r = E.root().r;
    const unsigned seed = opt.sqrt_seed;
    Product P;
    P.r = r;
    for (int e = 0; e < T.n_edges(); ++e) P.edge_w.emplace_back(size_t(r), T.in_Y(e) ? E.b() : Scalar(1));
    for (int t = 0; t < T.n_tets(); ++t) {
        Table tab = tet_table(E, T, S, t, opt.sum.threads);
        std::array<int, 4> v{0, 1, 2, 3}; // slots sorted by vertex rank
        const auto& ids = T.tets()[size_t(t)].v;
        std::sort(v.begin(), v.end(), [&](int a, int b) { return rank.at(ids[size_t(a)]) < rank.at(ids[size_t(b)]); });
        for (long long n = 0; n < (long long)tab.val.size(); ++n) {
            if (tab.val[size_t(n)] == Scalar(0)) continue;
            int idx[6];
            long long m = n;
            for (int& x : idx) x = int(m % r), m /= r;
            auto sd = [&](int a, int b) {
                int k = edge_index(a, b);
                return sqrt_d(E, S.label(tab.cls[size_t(k)], idx[k]), seed);
            };
            Scalar s1 = 1;
            for (int k = 0; k < 6; ++k) {
                auto [a, b] = edge_slots(k);
                s1 *= std::pow(sd(a, b), ch.twice(t, a, b));
            }
            Scalar s2 = 1.0 / (sd(v[0], v[2]) * sd(v[1], v[3]) * sd(v[0], v[3]) * sd(v[0], v[3]));
            tab.val[size_t(n)] *= s1 * s2;
        }
        P.tables.push_back(std::move(tab));
    }
    // the pairing on a face is theta divided by d of its min-to-max edge
    auto extra = [&](int gi, const std::vector<int>& state) {
        const auto& g = T.gluings()[size_t(gi)];
        const auto& ids = T.tets()[size_t(g.tet)].v;
        std::vector<int> fs;
        for (int a = 0; a < 4; ++a)
            if (a != g.face) fs.push_back(a);
        std::sort(fs.begin(), fs.end(), [&](int a, int b) { return rank.at(ids[size_t(a)]) < rank.at(ids[size_t(b)]); });
        int e = T.edge_of(g.tet, fs.front(), fs.back()).first;
        return E.d(S.label(e, state[size_t(e)]));
    };
    for (auto& f : face_tables(E, T, S, opt.sum.threads, extra)) P.tables.push_back(std::move(f));
    SumResult res;
    res.value = product_sum(P, S.count(), opt.sum.threads);
    res.states = S.count();
    res.runtime_ms = ms_since(t0);
    return res;
}

} // namespace qtv
