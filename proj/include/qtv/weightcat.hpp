#pragma once

// Typical modules of unrolled quantum sl2 at an odd root of unity, their
// braiding, twist, duality, and the scalar functions d, b, S'.
//
// Conventions: basis v_0..v_{r-1} with v_0 highest weight, F v_p = v_{p+1},
// H v_p = (a - 2p) v_p, K = q^H, E v_p = [p][a-p+1] v_{p-1}.
// Coproduct D(E) = 1(x)E + E(x)K, D(F) = K^-1(x)F + F(x)1, D(K) = K(x)K.
// Tensor index of V(x)W is i*dim(W) + j.

#include <qtv/qarith.hpp>

#include <Eigen/Dense>

#include <vector>

namespace qtv {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Generator action on some module (simple, dual or tensor product).
struct Action {
    Mat E, F, K, Kinv, H;
    int dim() const { return int(K.rows()); }
};

// A strand object: V_a (dual = false) or its dual V_a^* (dual = true).
struct Obj {
    Scalar a;
    bool dual = false;
    bool operator==(const Obj&) const = default;
};

struct TypicalModule {
    Scalar a;
    bool dual = false;
    Action act;
    std::vector<Scalar> hw; // H eigenvalue of each basis vector
    std::vector<Scalar> kw; // K eigenvalue of each basis vector
    int dim() const { return act.dim(); }
    Obj obj() const { return {a, dual}; }
};

struct Morphism {
    std::vector<Obj> source, target;
    Mat m;
};

// sl2 and general root data for the closed-form scalar functions
struct RootSystemData {
    int n = 1;
    Eigen::MatrixXd A;              // Cartan matrix
    Eigen::VectorXd d;              // symmetrizers
    std::vector<Eigen::VectorXi> pos_roots; // simple-root coordinates
    Eigen::MatrixXd form_roots;     // <alpha_i, alpha_j> = d_i a_ij
    Eigen::MatrixXd form_weights;   // <omega_i, omega_j>

    static RootSystemData from_cartan(const Eigen::MatrixXd& A, const Eigen::VectorXd& d);
    static RootSystemData sl2();

    // weights are coordinates lambda(H_i), roots are simple-root coordinates
    Scalar pair_ww(const Eigen::VectorXcd& l, const Eigen::VectorXcd& m) const;
    Scalar pair_wr(const Eigen::VectorXcd& l, const Eigen::VectorXi& beta) const;
    double pair_rr(const Eigen::VectorXi& b, const Eigen::VectorXi& c) const;
    Eigen::VectorXcd rho() const; // rho(H_i) = 1
};

Action tensor(const Action& V, const Action& W);
Mat kron(const Mat& A, const Mat& B);
Mat swap_matrix(int dv, int dw); // V(x)W -> W(x)V

bool is_typical(const RootData& rd, Scalar a);
bool is_typical(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l);
bool is_admissible_degree(const RootData& rd, double t, double eps_adm = 1e-6);
double degree(Scalar a);
std::vector<Scalar> state_reps(const RootData& rd, double t);
Scalar canonical_rep(const RootData& rd, Scalar a); // Re in [0, r)

TypicalModule build_typical(const RootData& rd, Scalar a);
TypicalModule dual_module(const RootData& rd, const TypicalModule& V);
TypicalModule make_module(const RootData& rd, Obj o);

// R = HR~ on V(x)W, and the braiding c = tau R : V(x)W -> W(x)V
Mat r_matrix(const RootData& rd, const TypicalModule& V, const TypicalModule& W);
Mat r_matrix_inverse(const RootData& rd, const TypicalModule& V, const TypicalModule& W);
Mat braiding(const RootData& rd, const TypicalModule& V, const TypicalModule& W);
Mat braiding_inverse(const RootData& rd, const TypicalModule& V, const TypicalModule& W);

Scalar twist_scalar(const RootData& rd, Scalar a);

// duality morphisms of V (V a genuine module, not a dual); vectors/covectors
// on the two-factor spaces with index i*dim + j
Vec coev(const TypicalModule& V, int r);       // b_V : 1 -> V (x) V^*
Vec ev(const TypicalModule& V, int r);         // d_V : V^* (x) V -> 1
Vec coev_prime(const TypicalModule& V, int r); // b'_V : 1 -> V^* (x) V
Vec ev_prime(const TypicalModule& V, int r);   // d'_V : V (x) V^* -> 1
Mat k_power(const TypicalModule& V, int p);

struct DualData {
    Scalar astar;
    Mat w; // V_a -> (V_{a*})^*
};
Scalar dual_weight(const RootData& rd, Scalar a);
DualData dual_data(const RootData& rd, Scalar a);

Scalar mdim(const RootData& rd, Scalar a);
Scalar mdim(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l);
Scalar bconst(const RootData& rd);
Scalar sprime_closed(const RootData& rd, Scalar a_lambda, Scalar b_mu);
Scalar sprime_closed(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l,
                     const Eigen::VectorXcd& m);

// max-norm residuals of the defining relations on one module
struct RelationResiduals {
    double kek, kfk, ef, hrel, er, fr, kh;
    double max() const;
};
RelationResiduals relation_residuals(const RootData& rd, const TypicalModule& V);

} // namespace qtv
