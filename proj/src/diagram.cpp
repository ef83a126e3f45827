#include <qtv/diagram.hpp>

#include <numeric>

namespace qtv {

namespace {

int word_dim(const std::vector<int>& dims, int from, int to) {
    int p = 1;
    for (int i = from; i < to; ++i) p *= dims[i];
    return p;
}

Obj dual_of(Obj o) { return {o.a, !o.dual}; }

} // namespace

// ---------------------------------------------------------------- structure

std::vector<std::vector<Obj>> RibbonDiagram::levels() const {
    std::vector<std::vector<Obj>> lv;
    lv.push_back(bottom);
    for (size_t h = 0; h < slices.size(); ++h) {
        const Slice& s = slices[h];
        std::vector<Obj> w = lv.back();
        const int n = int(w.size());
        auto bad = [&](const std::string& msg) {
            return Error(ErrorKind::Parse, "slice " + std::to_string(h) + ": " + msg);
        };
        switch (s.kind) {
        case Slice::Kind::Xp:
        case Slice::Kind::Xm:
            if (s.pos < 0 || s.pos + 1 >= n) throw bad("crossing position out of range");
            std::swap(w[s.pos], w[s.pos + 1]);
            break;
        case Slice::Kind::Cup:
            if (s.pos < 0 || s.pos > n) throw bad("cup position out of range");
            w.insert(w.begin() + s.pos, {s.cup_left, dual_of(s.cup_left)});
            break;
        case Slice::Kind::Cap:
            if (s.pos < 0 || s.pos + 1 >= n) throw bad("cap position out of range");
            if (!(std::abs(w[s.pos].a - w[s.pos + 1].a) < 1e-9 && w[s.pos].dual != w[s.pos + 1].dual))
                throw bad("cap joins strands of different color or equal orientation");
            w.erase(w.begin() + s.pos, w.begin() + s.pos + 2);
            break;
        case Slice::Kind::Coupon:
            if (s.pos < 0 || s.n_in < 0 || s.pos + s.n_in > n) throw bad("coupon inputs out of range");
            w.erase(w.begin() + s.pos, w.begin() + s.pos + s.n_in);
            w.insert(w.begin() + s.pos, s.out.begin(), s.out.end());
            break;
        }
        lv.push_back(std::move(w));
    }
    return lv;
}

std::vector<Obj> RibbonDiagram::level(int h) const { return levels().at(size_t(h)); }

RibbonDiagram stack(const RibbonDiagram& lower, const RibbonDiagram& upper) {
    if (!(lower.top() == upper.bottom))
        throw Error(ErrorKind::Parse, "stacked diagrams do not compose");
    RibbonDiagram D = lower;
    D.slices.insert(D.slices.end(), upper.slices.begin(), upper.slices.end());
    return D;
}

RibbonDiagram juxtapose(const RibbonDiagram& left, const RibbonDiagram& right) {
    RibbonDiagram D;
    D.bottom = left.bottom;
    D.bottom.insert(D.bottom.end(), right.bottom.begin(), right.bottom.end());
    D.slices = left.slices;
    const int shift = int(left.top().size());
    for (Slice s : right.slices) {
        s.pos += shift;
        D.slices.push_back(s);
    }
    return D;
}

// ---------------------------------------------------------------- evaluation

Mat apply_local(const Mat& state, const std::vector<int>& dims, int pos, int n_in, const Mat& op,
                const std::vector<int>& out_dims) {
    const int L = word_dim(dims, 0, pos);
    const int Li = word_dim(dims, pos, pos + n_in);
    const int R = word_dim(dims, pos + n_in, int(dims.size()));
    const int Lo = std::accumulate(out_dims.begin(), out_dims.end(), 1, std::multiplies<int>());
    if (op.rows() != Lo || op.cols() != Li)
        throw Error(ErrorKind::InvalidInput, "local operator has wrong shape");
    const Eigen::Index C = state.cols();
    Mat out = Mat::Zero(Eigen::Index(L) * Lo * R, C);
    for (Eigen::Index c = 0; c < C; ++c)
        for (int l = 0; l < L; ++l)
            for (int k = 0; k < Li; ++k)
                for (int rr = 0; rr < R; ++rr) {
                    Scalar x = state(Eigen::Index(l) * Li * R + Eigen::Index(k) * R + rr, c);
                    if (x == Scalar(0)) continue;
                    for (int o = 0; o < Lo; ++o) {
                        Scalar f = op(o, k);
                        if (f != Scalar(0)) out(Eigen::Index(l) * Lo * R + Eigen::Index(o) * R + rr, c) += f * x;
                    }
                }
    return out;
}

const TypicalModule& Evaluator::module(Obj o) {
    for (const auto& [k, v] : cache_)
        if (k == o) return v;
    cache_.emplace_back(o, make_module(rd_, o));
    return cache_.back().second;
}

Mat Evaluator::slice_operator(const Slice& s, const std::vector<Obj>& below) {
    const int r = rd_.r;
    switch (s.kind) {
    case Slice::Kind::Xp: {
        TypicalModule X = module(below[s.pos]), Y = module(below[s.pos + 1]);
        return braiding(rd_, X, Y);
    }
    case Slice::Kind::Xm: {
        TypicalModule X = module(below[s.pos]), Y = module(below[s.pos + 1]);
        return braiding_inverse(rd_, Y, X);
    }
    case Slice::Kind::Cup: {
        const TypicalModule& V = module({s.cup_left.a, false});
        return s.cup_left.dual ? Mat(coev_prime(V, r)) : Mat(coev(V, r));
    }
    case Slice::Kind::Cap: {
        const TypicalModule& V = module({below[s.pos].a, false});
        return below[s.pos].dual ? Mat(ev(V, r).transpose()) : Mat(ev_prime(V, r).transpose());
    }
    case Slice::Kind::Coupon:
        return s.m;
    }
    return {};
}

namespace {

std::vector<int> dims_of(Evaluator& ev, const std::vector<Obj>& w) {
    std::vector<int> d;
    for (const auto& o : w) d.push_back(ev.module(o).dim());
    return d;
}

int n_in_of(const Slice& s) {
    switch (s.kind) {
    case Slice::Kind::Xp:
    case Slice::Kind::Xm:
    case Slice::Kind::Cap: return 2;
    case Slice::Kind::Cup: return 0;
    case Slice::Kind::Coupon: return s.n_in;
    }
    return 0;
}

std::vector<int> out_dims_of(Evaluator& ev, const Slice& s, const std::vector<Obj>& above) {
    int n_out = 0;
    switch (s.kind) {
    case Slice::Kind::Xp:
    case Slice::Kind::Xm:
    case Slice::Kind::Cup: n_out = 2; break;
    case Slice::Kind::Cap: n_out = 0; break;
    case Slice::Kind::Coupon: n_out = int(s.out.size()); break;
    }
    std::vector<Obj> o(above.begin() + s.pos, above.begin() + s.pos + n_out);
    return dims_of(ev, o);
}

} // namespace

Morphism Evaluator::evaluate(const RibbonDiagram& D) {
    auto lv = D.levels();
    std::vector<int> dims = dims_of(*this, lv[0]);
    int din = word_dim(dims, 0, int(dims.size()));
    Mat state = Mat::Identity(din, din);
    for (size_t h = 0; h < D.slices.size(); ++h) {
        const Slice& s = D.slices[h];
        Mat op = slice_operator(s, lv[h]);
        std::vector<int> od = out_dims_of(*this, s, lv[h + 1]);
        state = apply_local(state, dims, s.pos, n_in_of(s), op, od);
        dims = dims_of(*this, lv[h + 1]);
    }
    return {lv.front(), lv.back(), state};
}

Scalar Evaluator::cut_scalar(const RibbonDiagram& D, int h, int pos, double* residual) {
    auto lv = D.levels();
    if (!lv.front().empty() || !lv.back().empty())
        throw Error(ErrorKind::InvalidInput, "cut evaluation needs a closed diagram");
    if (h < 0 || h >= int(lv.size()) || pos < 0 || pos >= int(lv[h].size()))
        throw Error(ErrorKind::InvalidInput, "cut point outside the diagram");

    // lower part as a vector
    std::vector<int> dims;
    Mat B = Mat::Ones(1, 1);
    for (int s = 0; s < h; ++s) {
        const Slice& sl = D.slices[s];
        B = apply_local(B, dims, sl.pos, n_in_of(sl), slice_operator(sl, lv[s]),
                        out_dims_of(*this, sl, lv[s + 1]));
        dims = dims_of(*this, lv[s + 1]);
    }
    // upper part as a covector, transposed slices from the top down
    std::vector<int> tdims;
    Mat T = Mat::Ones(1, 1);
    for (int s = int(D.slices.size()) - 1; s >= h; --s) {
        const Slice& sl = D.slices[s];
        Mat op = slice_operator(sl, lv[s]);
        std::vector<int> od = out_dims_of(*this, sl, lv[s + 1]);
        std::vector<int> below = dims_of(*this, lv[s]);
        std::vector<int> in_d(below.begin() + sl.pos, below.begin() + sl.pos + n_in_of(sl));
        T = apply_local(T, tdims, sl.pos, int(od.size()), op.transpose(), in_d);
        tdims = below;
    }

    const auto& w = lv[h];
    const int L = word_dim(dims, 0, pos), n = dims[pos], R = word_dim(dims, pos + 1, int(dims.size()));
    std::vector<Scalar> kl(L, 1.0), kr(R, 1.0);
    for (int l = 0; l < L; ++l) {
        int rem = l;
        for (int p = pos - 1; p >= 0; --p) {
            const auto& M = module(w[p]);
            kl[l] *= std::pow(M.kw[rem % dims[p]], rd_.r - 1);
            rem /= dims[p];
        }
    }
    for (int rr = 0; rr < R; ++rr) {
        int rem = rr;
        for (int p = int(w.size()) - 1; p > pos; --p) {
            const auto& M = module(w[p]);
            kr[rr] *= std::pow(M.kw[rem % dims[p]], 1 - rd_.r);
            rem /= dims[p];
        }
    }
    Mat TV = Mat::Zero(n, n);
    for (int l = 0; l < L; ++l)
        for (int rr = 0; rr < R; ++rr) {
            Scalar f = kl[l] * kr[rr];
            for (int a = 0; a < n; ++a) {
                Scalar ba = B(Eigen::Index(l) * n * R + Eigen::Index(a) * R + rr, 0);
                if (ba == Scalar(0)) continue;
                for (int b = 0; b < n; ++b)
                    TV(a, b) += f * ba * T(Eigen::Index(l) * n * R + Eigen::Index(b) * R + rr, 0);
            }
        }
    Scalar x = TV.trace() / double(n);
    if (residual) {
        double scale = std::max(1.0, std::abs(x));
        *residual = (TV - x * Mat::Identity(n, n)).cwiseAbs().maxCoeff() / scale;
    }
    return x;
}

Morphism evaluate(const RootData& rd, const RibbonDiagram& D) {
    Evaluator ev(rd);
    return ev.evaluate(D);
}

Scalar scalar_of(const RootData&, const Morphism& M, double tol) {
    if (M.source.size() != 1 || !(M.source == M.target))
        throw Error(ErrorKind::InvalidInput, "scalar_of needs an endomorphism of a single module");
    const Eigen::Index n = M.m.rows();
    Scalar x = M.m.trace() / double(n);
    double res = (M.m - x * Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (res > tol * std::max(1.0, std::abs(x)))
        throw Error(ErrorKind::NotScalar, "off-identity residual " + std::to_string(res));
    return x;
}

bool admissible_color(const RootData& rd, Scalar a) {
    if (!is_typical(rd, a)) return false;
    Scalar den = qbracket(rd, double(rd.r) * (a - double(rd.r - 1)));
    return std::abs(den) > 1e-6;
}

Scalar gprime(const RootData& rd, const RibbonDiagram& D, CutPoint cut) {
    auto lv = D.levels();
    if (cut.level < 0 || cut.level >= int(lv.size()) || cut.pos < 0 ||
        cut.pos >= int(lv[cut.level].size()))
        throw Error(ErrorKind::InvalidInput, "cut point outside the diagram");
    Scalar a = lv[cut.level][cut.pos].a;
    if (!admissible_color(rd, a))
        throw Error(ErrorKind::Inadmissible, "cut edge color is not admissible");
    Evaluator ev(rd);
    return mdim(rd, a) * ev.cut_scalar(D, cut.level, cut.pos);
}

std::vector<CutPoint> admissible_cuts(const RootData& rd, const RibbonDiagram& D) {
    std::vector<CutPoint> cuts;
    auto lv = D.levels();
    for (int h = 0; h < int(lv.size()); ++h)
        for (int p = 0; p < int(lv[h].size()); ++p)
            if (admissible_color(rd, lv[h][p].a)) cuts.push_back({h, p});
    if (cuts.empty()) throw Error(ErrorKind::Inadmissible, "no edge with admissible color");
    return cuts;
}

// ---------------------------------------------------------------- catalog

namespace catalog {

RibbonDiagram identity(Scalar a) { return {{{a, false}}, {}}; }

RibbonDiagram zigzag(Scalar a) {
    RibbonDiagram D;
    D.bottom = {{a, false}};
    D.slices = {Slice::cup(0, {a, false}), Slice::cap(1)};
    return D;
}

RibbonDiagram curl(Scalar a, bool positive) {
    RibbonDiagram D;
    D.bottom = {{a, false}};
    D.slices = {Slice::cup(1, {a, false}), positive ? Slice::xp(0) : Slice::xm(0), Slice::cap(1)};
    return D;
}

RibbonDiagram unknot(Scalar a) {
    RibbonDiagram D;
    D.slices = {Slice::cup(0, {a, false}), Slice::cap(0)};
    return D;
}

RibbonDiagram open_hopf(Scalar loop, Scalar open) {
    RibbonDiagram D;
    D.bottom = {{open, false}};
    D.slices = {Slice::cup(1, {loop, false}), Slice::xp(0), Slice::xp(0), Slice::cap(1)};
    return D;
}

RibbonDiagram hopf(Scalar a, Scalar b) {
    RibbonDiagram D;
    D.slices = {Slice::cup(0, {b, false}), Slice::cup(1, {a, false}), Slice::xp(0), Slice::xp(0),
                Slice::cap(1), Slice::cap(0)};
    return D;
}

RibbonDiagram theta(const RootData& rd, Scalar i, Scalar j, Scalar k, const Vec& x, const Vec& y) {
    Scalar is = dual_weight(rd, i), js = dual_weight(rd, j), ks = dual_weight(rd, k);
    RibbonDiagram D;
    D.slices.push_back(Slice::coupon(0, 0, {{i, false}, {j, false}, {k, false}}, Mat(x)));
    D.slices.push_back(Slice::coupon(3, 0, {{ks, false}, {js, false}, {is, false}}, Mat(y)));
    // edge pairings V_c (x) V_{c*} -> 1 as d_{V_{c*}} (w_c (x) Id), innermost first
    const Scalar legs[3] = {k, j, i}, duals[3] = {ks, js, is};
    for (int e = 0; e < 3; ++e) {
        int p = 2 - e;
        D.slices.push_back(Slice::coupon(p, 1, {{duals[e], true}}, dual_data(rd, legs[e]).w));
        D.slices.push_back(Slice::cap(p));
    }
    return D;
}

} // namespace catalog

} // namespace qtv
