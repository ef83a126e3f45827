#include <qtv/statesum.hpp>

#include <numeric>
#include <set>

namespace qtv {

namespace {

using i128 = __int128;

long long narrow(i128 x) {
    if (x > i128(INT64_MAX) || x < i128(INT64_MIN)) throw Error(ErrorKind::Infeasible, "integer overflow in the charge solver");
    return (long long)x;
}

// constraint rows over the 3 unknowns per tetrahedron
void charge_system(const HTriangulation& T, std::vector<std::vector<long long>>& A, std::vector<long long>& b) {
    const int n = 3 * T.n_tets();
    A.clear(), b.clear();
    for (int t = 0; t < T.n_tets(); ++t) {
        std::vector<long long> row(size_t(n), 0);
        for (int k = 0; k < 3; ++k) row[size_t(3 * t + k)] = 1;
        A.push_back(row), b.push_back(1);
    }
    for (int e = 0; e < T.n_edges(); ++e) {
        std::vector<long long> row(size_t(n), 0);
        for (const auto& s : T.edge_slots_of(e)) row[size_t(3 * s.tet + charge_pair(s.a, s.b))] += 1;
        A.push_back(row), b.push_back(T.in_Y(e) ? 0 : 2);
    }
}

} // namespace

int charge_pair(int a, int b) {
    if (a > b) std::swap(a, b);
    if ((a == 0 && b == 1) || (a == 2 && b == 3)) return 0;
    if ((a == 0 && b == 2) || (a == 1 && b == 3)) return 1;
    return 2;
}

int Charge::twice(int t, int a, int b) const { return x.at(size_t(t))[size_t(charge_pair(a, b))]; }

std::optional<std::vector<long long>> solve_integer(const std::vector<std::vector<long long>>& A0,
                                                    const std::vector<long long>& b,
                                                    std::vector<std::vector<long long>>* kernel) {
    const size_t m = A0.size(), n = m ? A0[0].size() : 0;
    std::vector<std::vector<i128>> H(m, std::vector<i128>(n)), U(n, std::vector<i128>(n, 0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) H[i][j] = A0[i][j];
    for (size_t j = 0; j < n; ++j) U[j][j] = 1;
    // column operation: (c1, c2) <- (c1, c2) [[p, q], [r, s]]
    auto colop = [&](size_t c1, size_t c2, i128 p, i128 q, i128 r, i128 s) {
        for (auto* M : {&H, &U})
            for (auto& row : *M) {
                i128 x = row[c1], y = row[c2];
                row[c1] = p * x + r * y;
                row[c2] = q * x + s * y;
            }
    };
    std::vector<std::pair<size_t, size_t>> pivots; // (row, column)
    size_t pc = 0;
    for (size_t i = 0; i < m && pc < n; ++i) {
        for (size_t j = pc + 1; j < n; ++j) {
            if (H[i][j] == 0) continue;
            // extended gcd on H[i][pc], H[i][j]
            i128 a = H[i][pc], c = H[i][j];
            i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1, aa = a, cc = c;
            while (cc != 0) {
                i128 q = aa / cc;
                i128 t = aa - q * cc;
                aa = cc, cc = t;
                t = x0 - q * x1, x0 = x1, x1 = t;
                t = y0 - q * y1, y0 = y1, y1 = t;
            }
            // aa = x0 a + y0 c; new pc = x0 pc + y0 j, new j = (-c/aa) pc + (a/aa) j
            colop(pc, j, x0, -c / aa, y0, a / aa);
        }
        if (H[i][pc] == 0) continue;
        if (H[i][pc] < 0) colop(pc, pc, -1, 0, 0, -1);
        pivots.emplace_back(i, pc);
        ++pc;
    }
    // forward substitution on H y = b
    std::vector<i128> y(n, 0);
    for (size_t k = 0; k < pivots.size(); ++k) {
        auto [row, col] = pivots[k];
        i128 rhs = b[row];
        for (size_t c = 0; c < col; ++c) rhs -= H[row][c] * y[c];
        if (rhs % H[row][col] != 0) return std::nullopt;
        y[col] = rhs / H[row][col];
    }
    std::vector<long long> x(n, 0);
    for (size_t j = 0; j < n; ++j) {
        i128 s = 0;
        for (size_t c = 0; c < n; ++c) s += U[j][c] * y[c];
        x[j] = narrow(s);
    }
    for (size_t i = 0; i < m; ++i) {
        i128 s = 0;
        for (size_t j = 0; j < n; ++j) s += i128(A0[i][j]) * x[j];
        if (s != b[i]) return std::nullopt;
    }
    if (kernel) {
        kernel->clear();
        for (size_t c = pc; c < n; ++c) {
            std::vector<long long> v(n);
            for (size_t j = 0; j < n; ++j) v[j] = narrow(U[j][c]);
            kernel->push_back(v);
        }
    }
    return x;
}

std::string charge_violation(const HTriangulation& T, const Charge& c) {
    if (int(c.x.size()) != T.n_tets()) return "charge has the wrong number of tetrahedra";
    for (int t = 0; t < T.n_tets(); ++t) {
        const auto& x = c.x[size_t(t)];
        // each face meets one edge of every opposite pair
        if (x[0] + x[1] + x[2] != 1) return "face sum of tetrahedron " + std::to_string(t) + " is not 1/2";
    }
    for (int e = 0; e < T.n_edges(); ++e) {
        long long s = 0;
        for (const auto& sl : T.edge_slots_of(e)) s += c.twice(sl.tet, sl.a, sl.b);
        long long want = T.in_Y(e) ? 0 : 2;
        if (s != want) {
            auto [u, v] = T.edge_ends(e);
            return "edge " + std::to_string(u) + "-" + std::to_string(v) + " has charge sum " + std::to_string(s) + "/2";
        }
    }
    return {};
}

std::vector<Charge> charge_solutions(const HTriangulation& T, int count) {
    std::vector<std::vector<long long>> A, K;
    std::vector<long long> b;
    charge_system(T, A, b);
    auto x = solve_integer(A, b, &K);
    if (!x) throw Error(ErrorKind::Infeasible, "no integral charge exists");
    auto make = [&](const std::vector<long long>& v) {
        Charge c;
        for (int t = 0; t < T.n_tets(); ++t)
            c.x.push_back({int(v[size_t(3 * t)]), int(v[size_t(3 * t + 1)]), int(v[size_t(3 * t + 2)])});
        return c;
    };
    std::vector<Charge> out{make(*x)};
    for (size_t k = 0; k < K.size() && int(out.size()) < count; ++k) {
        auto v = *x;
        for (size_t j = 0; j < v.size(); ++j) v[j] += K[k][j];
        out.push_back(make(v));
    }
    for (const auto& c : out)
        if (auto why = charge_violation(T, c); !why.empty()) throw Error(ErrorKind::Infeasible, "charge check failed: " + why);
    return out;
}

Charge charge_solve(const HTriangulation& T) { return charge_solutions(T, 1).front(); }

} // namespace qtv
