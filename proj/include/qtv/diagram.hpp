#pragma once

// Colored ribbon diagrams as Morse words, their evaluation, cutting
// presentations and the renormalized invariant G'.
//
// A strand oriented up and colored a is the object V_a, oriented down it is
// V_a^*.  Slices act on the current row of strands:
//   xp   : c_{X,Y} on strands pos, pos+1
//   xm   : c_{Y,X}^{-1} on strands pos, pos+1
//   cup  : b_V (left strand up) or b'_V (left strand down), inserted at pos
//   cap  : d_V on (V^*, V) or d'_V on (V, V^*) at pos, pos+1
//   coupon: n_in strands at pos replaced by the coupon outputs

#include <qtv/weightcat.hpp>

#include <map>
#include <string>
#include <vector>

namespace qtv {

struct Slice {
    enum class Kind { Xp, Xm, Cup, Cap, Coupon };
    Kind kind = Kind::Xp;
    int pos = 0;
    Obj cup_left{};          // cup: object of the new left strand
    int n_in = 0;            // coupon
    std::vector<Obj> out;    // coupon
    Mat m;                   // coupon, out_dim x in_dim

    static Slice xp(int pos) { return {Kind::Xp, pos, {}, 0, {}, {}}; }
    static Slice xm(int pos) { return {Kind::Xm, pos, {}, 0, {}, {}}; }
    static Slice cup(int pos, Obj left) { return {Kind::Cup, pos, left, 0, {}, {}}; }
    static Slice cap(int pos) { return {Kind::Cap, pos, {}, 0, {}, {}}; }
    static Slice coupon(int pos, int n_in, std::vector<Obj> out, Mat m) {
        return {Kind::Coupon, pos, {}, n_in, std::move(out), std::move(m)};
    }
};

struct RibbonDiagram {
    std::vector<Obj> bottom;
    std::vector<Slice> slices;

    // strand objects below slice h (h = slices.size() gives the top)
    std::vector<Obj> level(int h) const;
    std::vector<std::vector<Obj>> levels() const; // throws Parse if ill-formed
    std::vector<Obj> top() const { return level(int(slices.size())); }
    bool closed() const { return bottom.empty() && top().empty(); }
};

RibbonDiagram stack(const RibbonDiagram& lower, const RibbonDiagram& upper);
RibbonDiagram juxtapose(const RibbonDiagram& left, const RibbonDiagram& right);

// Evaluates slices with cached module data for one root of unity.
class Evaluator {
public:
    explicit Evaluator(const RootData& rd) : rd_(rd) {}
    const RootData& root() const { return rd_; }

    Morphism evaluate(const RibbonDiagram& D);
    // <T_V> for the closed diagram D opened at strand pos of level h
    Scalar cut_scalar(const RibbonDiagram& D, int h, int pos, double* residual = nullptr);
    const TypicalModule& module(Obj o);

    // local operator of a slice given the strands it acts on
    Mat slice_operator(const Slice& s, const std::vector<Obj>& below);

private:
    RootData rd_;
    std::vector<std::pair<Obj, TypicalModule>> cache_;
};

struct CutPoint {
    int level = 0;
    int pos = 0;
};

Morphism evaluate(const RootData& rd, const RibbonDiagram& D);
Scalar scalar_of(const RootData& rd, const Morphism& M, double tol = 1e-7);
Scalar gprime(const RootData& rd, const RibbonDiagram& D, CutPoint cut);
// every (level, pos) whose strand color has admissible degree
std::vector<CutPoint> admissible_cuts(const RootData& rd, const RibbonDiagram& D);
bool admissible_color(const RootData& rd, Scalar a);

// apply a local operator to strands [pos, pos + n_in) of a state whose rows
// index the tensor word with dimensions dims
Mat apply_local(const Mat& state, const std::vector<int>& dims, int pos, int n_in,
                const Mat& op, const std::vector<int>& out_dims);

namespace catalog {
RibbonDiagram identity(Scalar a);
RibbonDiagram zigzag(Scalar a);
RibbonDiagram curl(Scalar a, bool positive);
RibbonDiagram unknot(Scalar a);
RibbonDiagram hopf(Scalar a, Scalar b);
RibbonDiagram open_hopf(Scalar loop, Scalar open);
// theta graph with coupons x in Hom(1, V_i V_j V_k), y in Hom(1, V_k* V_j* V_i*)
// given as vectors; edges use the pairing coupons w
RibbonDiagram theta(const RootData& rd, Scalar i, Scalar j, Scalar k, const Vec& x, const Vec& y);
} // namespace catalog

// JSON diagram files
RibbonDiagram parse_diagram_json(const std::string& text, std::map<std::string, Scalar>* colors = nullptr);
RibbonDiagram parse_pd_json(const std::string& text);
std::string diagram_to_json(const RibbonDiagram& D);

} // namespace qtv
