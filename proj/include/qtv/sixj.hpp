#pragma once

// Multiplicity spaces H^{ijk} = Hom(1, V_i V_j V_k), the theta pairing,
// modified 6j-symbols and the identities they satisfy.
//
// Labels are canonical weights (real part in [0, r)).  Every H(i,j,k) has a
// chosen basis vector on the rotation that is smallest in label order; other
// rotations carry its image under sigma.  Tensors are stored by their value
// on these basis vectors, so contracting a matched pair divides by the theta
// pairing of the two basis vectors.

#include <qtv/diagram.hpp>

#include <array>
#include <map>
#include <memory>
#include <random>
#include <shared_mutex>

namespace qtv {

using Triple = std::array<Scalar, 3>;

struct MultSpace {
    Triple idx;
    std::vector<Vec> basis; // orthonormal basis of invariant vectors in V_i V_j V_k
    int dim() const { return int(basis.size()); }
};

// element of (x)_f H(f)^*, all factors one-dimensional
struct MultTensor {
    std::vector<Triple> factors;
    Scalar value = 0;
};

struct PairStep {
    int a, fa, b, fb; // contract factor fa of tensor a with factor fb of tensor b
};

class SixJEngine {
public:
    explicit SixJEngine(const RootData& rd);
    const RootData& root() const { return rd_; }

    Scalar canon(Scalar a) const { return canonical_rep(rd_, a); }
    Scalar star(Scalar a) const;
    Triple dual_triple(const Triple& t) const; // (i,j,k) -> (k*,j*,i*)
    Scalar d(Scalar a) const;
    Scalar b() const { return bconst(rd_); }

    const Mat& w(Scalar a);    // w_a : V_a -> (V_{a*})^*
    const Mat& pair(Scalar a); // bilinear form V_a x V_{a*} -> C, equal to w_a^T
    const TypicalModule& module(Scalar a);

    MultSpace mult_basis(Scalar i, Scalar j, Scalar k); // raw kernel basis
    int dim(Scalar i, Scalar j, Scalar k);
    // basis vector of the symmetrized space, expressed on rotation (i,j,k);
    // empty vector when the space is zero
    Vec basis(Scalar i, Scalar j, Scalar k);
    Vec sigma(Scalar i, Scalar j, Scalar k, const Vec& x); // H^{ijk} -> H^{jki}

    Scalar theta(Scalar i, Scalar j, Scalar k);                        // on basis vectors
    Scalar theta(Scalar i, Scalar j, Scalar k, const Vec& x, const Vec& y); // general
    Scalar sixj(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n);
    MultTensor sixj_tensor(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n);
    MultTensor identity_tensor(Scalar a, Scalar b, Scalar c); // Id(a,b,c)

    // same quantities evaluated through Morse-word diagrams (slow oracle)
    RibbonDiagram gamma_diagram(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n);
    RibbonDiagram theta_diagram(Scalar i, Scalar j, Scalar k);

    bool same_class(const Triple& a, const Triple& b) const; // equal up to rotation
    MultTensor contract(const std::vector<MultTensor>& ts, const std::vector<PairStep>& plan);

private:
    using Key = std::vector<long long>;
    Key key(std::initializer_list<Scalar> xs) const;
    Triple canonical_rotation(const Triple& t) const;
    Scalar sixj_compute(const Triple& C, const Triple& D, const Triple& B, const Triple& A);

    RootData rd_;
    mutable std::shared_mutex mu_;
    mutable std::map<Key, Scalar> star_, d_;
    std::map<Key, TypicalModule> modules_;
    std::map<Key, Mat> w_, pair_;
    std::map<Key, Vec> basis_;  // canonical rotation -> vector (size 0 if zero space)
    std::map<Key, Scalar> theta_, sixj_;
};

struct IdentityResidual {
    double residual = 0; // max relative deviation
    Scalar lhs = 0, rhs = 0;
};

// random admissible degrees in (0,1) avoiding {0, 1/2} by margin
double random_degree(std::mt19937_64& rng, double margin = 0.02);

IdentityResidual check_BE(SixJEngine& E, const std::array<Scalar, 9>& j);
IdentityResidual check_orth(SixJEngine& E, Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar p);
IdentityResidual check_bubble(SixJEngine& E, Scalar i, Scalar j, Scalar k, double g4, double g5, double g6);

} // namespace qtv
