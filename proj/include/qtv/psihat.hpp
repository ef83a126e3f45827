#pragma once

// The Psi-hat system of a relative G-spherical category: multiplicity blocks
// hat H_{ij}^k = Hom(V_i V_j, V_k) and check H^{ij}_k = Hom(V_k, V_i V_j),
// the operators A, B and the square-root data built from d^{1/2}.
//
// Every block is one-dimensional, so each operator used here sends a block to
// a single block with a scalar coefficient; operators are stored that way.

#include <qtv/sixj.hpp>

#include <map>
#include <string>

namespace qtv {

struct PsiBlock {
    bool hat = true; // hat: Hom(V_i V_j, V_k); check: Hom(V_k, V_i V_j)
    Triple idx;      // (i, j, k)
    Mat basis;       // hat r x r^2, check r^2 x r; columns/rows index (a, b) as a*r + b
};

// f(e_b) = coef[b] * e_{to[b]}
struct MonoOp {
    std::vector<int> to;
    std::vector<Scalar> coef;
};

struct PsiHatSpace {
    int r = 3;
    std::vector<double> seeds;
    std::vector<PsiBlock> blocks;
    std::vector<int> partner; // hat (i,j,k) <-> check (i,j,k)
    std::vector<Scalar> gram; // <e_b, e_partner(b)>
    MonoOp A, B;
    MonoOp delta, deltaA, deltaB; // deltaA = A delta A, deltaB = B delta B
    int find(bool hat, const Triple& idx) const;
    std::map<std::vector<long long>, int> index;
};

// Hom(V_i V_j, V_k) (hat) or Hom(V_k, V_i V_j) (check); columns of the
// returned list form a basis
std::vector<Mat> intertwiners(SixJEngine& E, bool hat, Scalar i, Scalar j, Scalar k);

// blocks over all triples whose degrees lie in +-{sums of consecutive seeds};
// the family is closed under A and B
PsiHatSpace build_psihat(SixJEngine& E, const std::vector<double>& seed_degrees, unsigned sqrt_seed = 0);

MonoOp compose(const MonoOp& f, const MonoOp& g); // f after g
MonoOp identity_op(size_t n);
MonoOp inverse(const MonoOp& f);
MonoOp transpose(const PsiHatSpace& P, const MonoOp& f);
MonoOp scalar_ratio(const MonoOp& f, const MonoOp& g); // f / g for diagonal operators
MonoOp power(const MonoOp& f, int k);
double op_distance(const MonoOp& f, const MonoOp& g); // max relative coefficient deviation, 1 if the maps differ

// T(u, v, x, y) on H^m_{kl} H^k_{ij} H^{jl}_n H^{in}_m, from the block bases
Scalar t_form(const Mat& u, const Mat& v, const Mat& x, const Mat& y, int r);

struct PsiCheck {
    std::string name;
    double residual = 0;
};

std::vector<PsiCheck> check_psihat(SixJEngine& E, const PsiHatSpace& P);

// sum over i1 in I_g1, i2 in I_g2 of dim Hom(V_k, V_i1 V_i2) for each k in I_{g1+g2}
std::vector<int> b_consistency_dims(SixJEngine& E, double g1, double g2);

} // namespace qtv
