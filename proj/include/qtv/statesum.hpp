#pragma once

// Turaev-Viro and Kashaev state sums over closed H-triangulations, integral
// charges, and the Psi-hat operator system.

#include <qtv/complex3d.hpp>
#include <qtv/sixj.hpp>

#include <functional>

namespace qtv {

// ---------------------------------------------------------------- tetrahedra

// slots (v1, v2, v3, v4) with (v1v2, v1v3, v1v4) positively oriented
std::array<int, 4> positive_order(const HTriangulation& T, int t);

// label of the oriented slot edge a -> b in a state
Scalar slot_label(const SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state,
                  int t, int a, int b);

// 6j tensor of tetrahedron t read in the vertex order `order` (slots), which
// must be positively oriented
MultTensor tet_tensor(SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state, int t,
                      const std::array<int, 4>& order);

// ---------------------------------------------------------------- sums

struct SumOptions {
    int threads = 1;
    long long max_states = 50'000'000;
};

struct SumResult {
    Scalar value = 0;
    long long states = 0;
    double runtime_ms = 0;
};

// sum of f(0..n-1) by fixed chunks and a pairwise tree; the result does not
// depend on the thread count
Scalar deterministic_sum(long long n, const std::function<Scalar(long long, long long)>& chunk_sum, int threads,
                         long long chunk = 4096);

SumResult tv_sum(SixJEngine& E, const HTriangulation& T, const GColoring& c, const SumOptions& opt = {});

// brute-force reference: builds every tetrahedron tensor and contracts face pairs
Scalar tv_state_term(SixJEngine& E, const HTriangulation& T, const StateSpace& S, const std::vector<int>& state);

// ---------------------------------------------------------------- charges

// twice the charge on the opposite edge pairs (01|23), (02|13), (03|12) of each tetrahedron
struct Charge {
    std::vector<std::array<int, 3>> x;
    // twice the charge on slot edge a-b of tetrahedron t
    int twice(int t, int a, int b) const;
};

int charge_pair(int a, int b); // slot edge -> opposite pair 0..2

// empty string when c satisfies every constraint exactly
std::string charge_violation(const HTriangulation& T, const Charge& c);
// up to `count` distinct solutions: a particular one plus kernel offsets
std::vector<Charge> charge_solutions(const HTriangulation& T, int count = 2);
Charge charge_solve(const HTriangulation& T);

// integer solution of A x = b via column Hermite normal form; nullopt if none.
// kernel receives a lattice basis of {x : A x = 0}
std::optional<std::vector<long long>> solve_integer(const std::vector<std::vector<long long>>& A,
                                                    const std::vector<long long>& b,
                                                    std::vector<std::vector<long long>>* kernel = nullptr);

// ---------------------------------------------------------------- Kashaev

// square root of d, equal on a and a*; sign_seed = 0 gives the principal root
// on every class, other seeds flip a pseudo-random subset of classes
Scalar sqrt_d(const SixJEngine& E, Scalar a, unsigned sign_seed = 0);

struct KashaevOptions {
    std::vector<int> vertex_order; // vertex ids, smallest first; empty = increasing ids
    unsigned sqrt_seed = 0;
    SumOptions sum;
};

SumResult kashaev_sum(SixJEngine& E, const HTriangulation& T, const GColoring& c, const Charge& ch,
                      const KashaevOptions& opt = {});

} // namespace qtv
