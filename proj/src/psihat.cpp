#include <qtv/psihat.hpp>
#include <qtv/statesum.hpp>
#include <qtv/weightcat.hpp>

#include <set>

namespace qtv {

namespace {

std::vector<long long> block_key(int r, bool hat, const Triple& t) {
    std::vector<long long> k{hat ? 1 : 0};
    for (Scalar x : t) {
        long long re = std::llround(x.real() * 1e6), im = std::llround(x.imag() * 1e6);
        if (re == std::llround(r * 1e6)) re = 0;
        k.push_back(re), k.push_back(im);
    }
    return k;
}

// coefficient c with y = c * e, and the relative deviation of y from that line
std::pair<Scalar, double> project(const Mat& y, const Mat& e) {
    Scalar c = (e.adjoint() * y).trace() / e.squaredNorm();
    double dev = (y - c * e).norm() / std::max(y.norm(), 1e-300);
    return {c, dev};
}

double rel(Scalar a, Scalar b) {
    double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0 : std::abs(a - b) / s;
}

} // namespace

int PsiHatSpace::find(bool hat, const Triple& idx) const {
    auto it = index.find(block_key(r, hat, idx));
    return it == index.end() ? -1 : it->second;
}

std::vector<Mat> intertwiners(SixJEngine& E, bool hat, Scalar i, Scalar j, Scalar k) {
    const int r = E.root().r, r2 = r * r;
    const TypicalModule &Vi = E.module(i), &Vj = E.module(j), &Vk = E.module(k);
    const Action P = tensor(Vi.act, Vj.act);
    // unknown entries where the K-weights match
    std::vector<std::pair<int, int>> cells; // (row, col) of the r x r^2 (hat) or r^2 x r (check) matrix
    for (int c = 0; c < r; ++c)
        for (int ab = 0; ab < r2; ++ab)
            if (std::abs(Vk.kw[size_t(c)] - Vi.kw[size_t(ab / r)] * Vj.kw[size_t(ab % r)]) < 1e-8)
                cells.push_back(hat ? std::make_pair(c, ab) : std::make_pair(ab, c));
    if (cells.empty()) return {};
    const int rows = hat ? r : r2, cols = hat ? r2 : r;
    const Eigen::Index n = rows * cols;
    Mat M = Mat::Zero(2 * n, Eigen::Index(cells.size()));
    // column u holds vec(X G_P - G_k X) (hat) or vec(G_P X - X G_k) (check)
    // for X the matrix unit of cell u, stacked for G = E, F
    for (size_t u = 0; u < cells.size(); ++u) {
        const auto [row, col] = cells[u];
        auto col_u = M.col(Eigen::Index(u));
        const Mat* gens[2][2] = {{&P.E, &Vk.act.E}, {&P.F, &Vk.act.F}};
        for (int g = 0; g < 2; ++g) {
            const Mat &GP = *gens[g][0], &Gk = *gens[g][1];
            const Eigen::Index off = g * n;
            if (hat) {
                for (int c2 = 0; c2 < cols; ++c2) col_u(off + row + rows * c2) += GP(col, c2);
                for (int r2 = 0; r2 < rows; ++r2) col_u(off + r2 + rows * col) -= Gk(r2, row);
            } else {
                for (int r2 = 0; r2 < rows; ++r2) col_u(off + r2 + rows * col) += GP(r2, row);
                for (int c2 = 0; c2 < cols; ++c2) col_u(off + row + rows * c2) -= Gk(col, c2);
            }
        }
    }
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        if (M.row(i).cwiseAbs().maxCoeff() > 0) live.push_back(i);
    Eigen::JacobiSVD<Mat> svd(M(live, Eigen::all), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    std::vector<Mat> out;
    for (Eigen::Index c = 0; c < Eigen::Index(cells.size()); ++c) {
        double s = c < sv.size() ? sv(c) : 0.0;
        if (s > 1e-7 * smax) continue;
        Mat X = Mat::Zero(rows, cols);
        for (size_t u = 0; u < cells.size(); ++u) X(cells[u].first, cells[u].second) = svd.matrixV()(Eigen::Index(u), c);
        // real positive at the first entry of maximal modulus
        double mx = X.cwiseAbs().maxCoeff();
        for (Eigen::Index p = 0; p < X.size(); ++p)
            if (std::abs(X.reshaped()(p)) >= mx * (1 - 1e-9)) {
                X *= std::conj(X.reshaped()(p)) / std::abs(X.reshaped()(p));
                break;
            }
        out.push_back(X);
    }
    return out;
}

PsiHatSpace build_psihat(SixJEngine& E, const std::vector<double>& seeds, unsigned sqrt_seed) {
    const RootData& rd = E.root();
    const int r = rd.r, r2 = r * r;
    PsiHatSpace P;
    P.r = r;
    P.seeds = seeds;
    // degrees: +- sums of consecutive seeds
    std::vector<double> D;
    for (size_t a = 0; a < seeds.size(); ++a) {
        double s = 0;
        for (size_t b = a; b < seeds.size(); ++b) {
            s += seeds[b];
            for (double x : {frac(s), frac(-s)}) {
                if (!is_admissible_degree(rd, x)) throw Error(ErrorKind::Inadmissible, "seed sums hit a non-admissible degree");
                bool seen = false;
                for (double y : D) seen |= lattice_dist(x - y, 1.0) < 1e-9;
                if (!seen) D.push_back(x);
            }
        }
    }
    auto in_D = [&](double x) {
        for (double y : D)
            if (lattice_dist(x - y, 1.0) < 1e-9) return true;
        return false;
    };
    for (double a : D)
        for (double b : D) {
            if (!in_D(a + b)) continue;
            for (Scalar i : state_reps(rd, a))
                for (Scalar j : state_reps(rd, b))
                    for (Scalar k : state_reps(rd, frac(a + b)))
                        for (bool hat : {true, false}) {
                            auto ws = intertwiners(E, hat, i, j, k);
                            if (ws.empty()) continue;
                            if (ws.size() > 1) throw Error(ErrorKind::InvalidInput, "multiplicity space of dimension above one");
                            P.index[block_key(r, hat, {i, j, k})] = int(P.blocks.size());
                            P.blocks.push_back({hat, {i, j, k}, ws[0]});
                        }
        }
    const size_t nb = P.blocks.size();
    P.partner.assign(nb, -1);
    P.gram.assign(nb, 0);
    for (size_t b = 0; b < nb; ++b) {
        const auto& B = P.blocks[b];
        int p = P.find(!B.hat, B.idx);
        if (p < 0) throw Error(ErrorKind::InvalidInput, "block without a partner");
        P.partner[b] = p;
        const Mat& x = B.hat ? B.basis : P.blocks[size_t(p)].basis;
        const Mat& y = B.hat ? P.blocks[size_t(p)].basis : B.basis;
        P.gram[b] = (x * y).trace() / double(r);
    }

    auto winv = [&](Scalar a) { return Mat(E.w(a).inverse()); };
    P.A = P.B = MonoOp{std::vector<int>(nb), std::vector<Scalar>(nb)};
    for (size_t b = 0; b < nb; ++b) {
        const auto& blk = P.blocks[b];
        const Scalar i = blk.idx[0], j = blk.idx[1], k = blk.idx[2];
        const Scalar is = E.star(i), js = E.star(j);
        const Mat& x = blk.basis;
        Mat ya, yb;
        Triple ta, tb;
        if (blk.hat) {
            // A: check (i*, k, j); B: check (k, j*, i)
            Mat Wi = winv(i), Wjs = winv(js);
            ya = Mat::Zero(r2, r);
            for (int p = 0; p < r; ++p)
                for (int c = 0; c < r; ++c)
                    for (int be = 0; be < r; ++be) {
                        Scalar s = 0;
                        for (int a = 0; a < r; ++a) s += Wi(a, p) * x(c, a * r + be);
                        ya(p * r + c, be) = s;
                    }
            yb = Mat::Zero(r2, r);
            for (int c = 0; c < r; ++c)
                for (int g = 0; g < r; ++g)
                    for (int al = 0; al < r; ++al) {
                        Scalar s = 0;
                        for (int be = 0; be < r; ++be) s += x(c, al * r + be) * Wjs(g, be);
                        yb(c * r + g, al) = s;
                    }
            ta = {is, k, j}, tb = {k, js, i};
        } else {
            // A: hat (i*, k, j); B: hat (k, j*, i)
            const Mat& Wi = E.w(i);
            const Mat& Wj = E.w(j);
            const TypicalModule& Vis = E.module(is);
            ya = Mat::Zero(r, r2);
            for (int be = 0; be < r; ++be)
                for (int p = 0; p < r; ++p)
                    for (int c = 0; c < r; ++c) {
                        Scalar s = 0;
                        for (int a = 0; a < r; ++a) s += Wi(p, a) * std::pow(Vis.kw[size_t(p)], 1 - r) * x(a * r + be, c);
                        ya(be, p * r + c) = s;
                    }
            yb = Mat::Zero(r, r2);
            for (int al = 0; al < r; ++al)
                for (int c = 0; c < r; ++c)
                    for (int g = 0; g < r; ++g) {
                        Scalar s = 0;
                        for (int be = 0; be < r; ++be) s += x(al * r + be, c) * Wj(g, be);
                        yb(al, c * r + g) = s;
                    }
            ta = {is, k, j}, tb = {k, js, i};
        }
        auto place = [&](MonoOp& op, const Mat& y, const Triple& t, const char* name) {
            int target = P.find(!blk.hat, t);
            if (target < 0) throw Error(ErrorKind::InvalidInput, std::string("index family not closed under ") + name);
            auto [c, dev] = project(y, P.blocks[size_t(target)].basis);
            if (dev > 1e-6) throw Error(ErrorKind::InvalidInput, std::string(name) + " leaves the target block");
            op.to[b] = target;
            op.coef[b] = c;
        };
        place(P.A, ya, ta, "A");
        place(P.B, yb, tb, "B");
    }
    P.delta = MonoOp{std::vector<int>(nb), std::vector<Scalar>(nb)};
    for (size_t b = 0; b < nb; ++b) {
        P.delta.to[b] = int(b);
        P.delta.coef[b] = sqrt_d(E, P.blocks[b].idx[2], sqrt_seed);
    }
    P.deltaA = compose(P.A, compose(P.delta, P.A));
    P.deltaB = compose(P.B, compose(P.delta, P.B));
    return P;
}

MonoOp compose(const MonoOp& f, const MonoOp& g) {
    MonoOp h{std::vector<int>(g.to.size()), std::vector<Scalar>(g.to.size())};
    for (size_t b = 0; b < g.to.size(); ++b) {
        h.to[b] = f.to[size_t(g.to[b])];
        h.coef[b] = f.coef[size_t(g.to[b])] * g.coef[b];
    }
    return h;
}

MonoOp identity_op(size_t n) {
    MonoOp h{std::vector<int>(n), std::vector<Scalar>(n, 1.0)};
    for (size_t b = 0; b < n; ++b) h.to[b] = int(b);
    return h;
}

MonoOp inverse(const MonoOp& f) {
    MonoOp h{std::vector<int>(f.to.size(), -1), std::vector<Scalar>(f.to.size())};
    for (size_t b = 0; b < f.to.size(); ++b) {
        h.to[size_t(f.to[b])] = int(b);
        h.coef[size_t(f.to[b])] = 1.0 / f.coef[b];
    }
    for (int t : h.to)
        if (t < 0) throw Error(ErrorKind::InvalidInput, "operator is not invertible");
    return h;
}

MonoOp transpose(const PsiHatSpace& P, const MonoOp& f) {
    MonoOp h{std::vector<int>(f.to.size()), std::vector<Scalar>(f.to.size())};
    for (size_t b = 0; b < f.to.size(); ++b) {
        size_t fb = size_t(f.to[b]);
        size_t src = size_t(P.partner[fb]);
        h.to[src] = P.partner[b];
        h.coef[src] = f.coef[b] * P.gram[fb] / P.gram[b];
    }
    return h;
}

MonoOp scalar_ratio(const MonoOp& f, const MonoOp& g) {
    MonoOp h = f;
    for (size_t b = 0; b < f.to.size(); ++b) {
        if (f.to[b] != int(b) || g.to[b] != int(b)) throw Error(ErrorKind::InvalidInput, "ratio of non-diagonal operators");
        h.coef[b] = f.coef[b] / g.coef[b];
    }
    return h;
}

MonoOp power(const MonoOp& f, int k) {
    MonoOp h = identity_op(f.to.size());
    MonoOp base = k >= 0 ? f : inverse(f);
    for (int n = 0; n < std::abs(k); ++n) h = compose(base, h);
    return h;
}

double op_distance(const MonoOp& f, const MonoOp& g) {
    double worst = 0;
    for (size_t b = 0; b < f.to.size(); ++b) {
        if (f.to[b] != g.to[b]) return 1.0;
        worst = std::max(worst, rel(f.coef[b], g.coef[b]));
    }
    return worst;
}

Scalar t_form(const Mat& u, const Mat& v, const Mat& x, const Mat& y, int r) {
    const Mat I = Mat::Identity(r, r);
    Mat m = u * kron(v, I) * kron(I, x) * y;
    return m.trace() / double(r);
}

std::vector<PsiCheck> check_psihat(SixJEngine& E, const PsiHatSpace& P) {
    const int r = P.r;
    const size_t nb = P.blocks.size();
    std::vector<PsiCheck> out;
    auto add = [&](const std::string& name, double res) { out.push_back({name, res}); };
    const MonoOp Id = identity_op(nb);
    const MonoOp &A = P.A, &B = P.B, &d = P.delta, &dA = P.deltaA, &dB = P.deltaB;
    auto C = [](const MonoOp& f, const MonoOp& g) { return compose(f, g); };

    add("A^2 = Id", op_distance(C(A, A), Id));
    add("B^2 = Id", op_distance(C(B, B), Id));
    add("ABA = BAB", op_distance(C(A, C(B, A)), C(B, C(A, B))));
    const MonoOp AB = C(A, B);
    const MonoOp Cop = C(AB, C(AB, AB));
    add("C = (AB)^3 = Id", op_distance(Cop, Id));

    // delta operators
    const MonoOp S = C(A, C(B, A));
    add("S* = S = S^-1", std::max(op_distance(transpose(P, S), S), op_distance(inverse(S), S)));
    add("SAS = B", op_distance(C(S, C(A, S)), B));
    double sym = 0;
    for (const MonoOp* f : {&d, &dA, &dB}) sym = std::max(sym, op_distance(transpose(P, *f), *f));
    add("delta, deltaA, deltaB symmetric", sym);
    add("delta operators commute", std::max({op_distance(C(d, dA), C(dA, d)), op_distance(C(d, dB), C(dB, d)),
                                             op_distance(C(dA, dB), C(dB, dA))}));
    add("S delta = delta S", op_distance(C(S, d), C(d, S)));
    add("S deltaA = deltaB S", op_distance(C(S, dA), C(dB, S)));
    add("A deltaB = deltaB A", op_distance(C(A, dB), C(dB, A)));
    add("B deltaA = deltaA B", op_distance(C(B, dA), C(dA, B)));
    add("A delta = deltaA A", op_distance(C(A, d), C(dA, A)));
    add("B delta = deltaB B", op_distance(C(B, d), C(dB, B)));
    const MonoOp L = C(transpose(P, A), A), R = C(transpose(P, B), B);
    const MonoOp dda = scalar_ratio(d, dA), ddb = scalar_ratio(d, dB);
    add("L = (delta/deltaA)^2", op_distance(L, C(dda, dda)));
    add("R = (delta/deltaB)^2", op_distance(R, C(ddb, ddb)));
    {
        // which index the conjugated deltas pick up
        double ra = 0, rb = 0;
        for (size_t b = 0; b < nb; ++b) {
            ra = std::max(ra, rel(dA.coef[b] * dA.coef[b], E.d(P.blocks[b].idx[1])));
            rb = std::max(rb, rel(dB.coef[b] * dB.coef[b], E.d(P.blocks[b].idx[0])));
        }
        add("deltaA^2 = d(second index)", ra);
        add("deltaB^2 = d(first index)", rb);
    }

    // square-root data
    const MonoOp C12 = Id, R12 = ddb;
    const MonoOp L12 = C(B, C(A, C(inverse(R12), C(A, B))));
    add("(C^1/2)^2 = C", op_distance(C(C12, C12), Cop));
    add("A C^1/2 A = B C^1/2 B = C^-1/2",
        std::max(op_distance(C(A, C(C12, A)), inverse(C12)), op_distance(C(B, C(C12, B)), inverse(C12))));
    add("(R^1/2)^2 = R", op_distance(C(R12, R12), R));
    add("B R^1/2 B = R^-1/2", op_distance(C(B, C(R12, B)), inverse(R12)));
    add("R^1/2 C^1/2 = C^1/2 R^1/2", op_distance(C(R12, C12), C(C12, R12)));
    add("R^1/2, C^1/2 symmetric", std::max(op_distance(transpose(P, R12), R12), op_distance(transpose(P, C12), C12)));
    add("L^1/2 = delta/deltaA", op_distance(L12, dda));
    add("q-tilde = R^1/2 A R^-1/2 A L^-1/2 C^-1/2 = Id",
        op_distance(C(R12, C(A, C(inverse(R12), C(A, C(inverse(L12), inverse(C12)))))), Id));

    // T-form identities over labels i, j, l in the first three seed degrees
    struct TId {
        std::string name;
        std::array<const MonoOp*, 4> lhs, rhs; // operator per factor, nullptr = Id
    };
    const MonoOp L12d = L12;
    std::vector<TId> tids = {
        {"T delta_1 = T delta_4", {&d, nullptr, nullptr, nullptr}, {nullptr, nullptr, nullptr, &d}},
        {"T deltaB_1 = T delta_2", {&dB, nullptr, nullptr, nullptr}, {nullptr, &d, nullptr, nullptr}},
        {"T deltaA_1 = T deltaA_3", {&dA, nullptr, nullptr, nullptr}, {nullptr, nullptr, &dA, nullptr}},
        {"T deltaA_2 = T deltaB_3", {nullptr, &dA, nullptr, nullptr}, {nullptr, nullptr, &dB, nullptr}},
        {"T deltaB_2 = T deltaB_4", {nullptr, &dB, nullptr, nullptr}, {nullptr, nullptr, nullptr, &dB}},
        {"T delta_3 = T deltaA_4", {nullptr, nullptr, &d, nullptr}, {nullptr, nullptr, nullptr, &dA}},
        {"T C_1 C_2 = T C_3 C_4", {&C12, &C12, nullptr, nullptr}, {nullptr, nullptr, &C12, &C12}},
        {"T R_1 L_2 = T R_3 L_4", {&R12, &L12d, nullptr, nullptr}, {nullptr, nullptr, &R12, &L12d}},
        {"T R_1 R_2 = T C_3 R_4", {&R12, &R12, nullptr, nullptr}, {nullptr, nullptr, &C12, &R12}},
        {"T L_1 = T C_2 L_3 L_4", {&L12d, nullptr, nullptr, nullptr}, {nullptr, &C12, &L12d, &L12d}},
    };
    std::vector<double> tres(tids.size(), 0);
    if (P.seeds.size() >= 3) {
        const RootData& rd = E.root();
        const double a = P.seeds[0], b = P.seeds[1], c = P.seeds[2];
        int evaluated = 0;
        for (Scalar i : state_reps(rd, frac(a)))
            for (Scalar j : state_reps(rd, frac(b)))
                for (Scalar l : state_reps(rd, frac(c)))
                    for (Scalar k : state_reps(rd, frac(a + b)))
                        for (Scalar n : state_reps(rd, frac(b + c)))
                            for (Scalar m : state_reps(rd, frac(a + b + c))) {
                                int f[4] = {P.find(true, {k, l, m}), P.find(true, {i, j, k}), P.find(false, {j, l, n}),
                                            P.find(false, {i, n, m})};
                                if (f[0] < 0 || f[1] < 0 || f[2] < 0 || f[3] < 0) continue;
                                Scalar t = t_form(P.blocks[size_t(f[0])].basis, P.blocks[size_t(f[1])].basis,
                                                  P.blocks[size_t(f[2])].basis, P.blocks[size_t(f[3])].basis, r);
                                if (std::abs(t) < 1e-12) continue;
                                ++evaluated;
                                for (size_t q = 0; q < tids.size(); ++q) {
                                    auto factor = [&](const std::array<const MonoOp*, 4>& ops) {
                                        Scalar s = 1;
                                        for (int z = 0; z < 4; ++z) {
                                            if (!ops[size_t(z)]) continue;
                                            const MonoOp& o = *ops[size_t(z)];
                                            if (o.to[size_t(f[z])] != f[z]) return Scalar(NAN);
                                            s *= o.coef[size_t(f[z])];
                                        }
                                        return s * t;
                                    };
                                    Scalar x = factor(tids[q].lhs), y = factor(tids[q].rhs);
                                    tres[q] = std::max(tres[q], std::isfinite(x.real()) && std::isfinite(y.real()) ? rel(x, y) : 1.0);
                                }
                            }
        if (evaluated == 0) tres.assign(tids.size(), 1.0);
    } else {
        tres.assign(tids.size(), 1.0);
    }
    for (size_t q = 0; q < tids.size(); ++q) add(tids[q].name, tres[q]);

    // pairing compatibility through the identifications with H(i,j,k*) and H(k,j*,i*)
    double pc = 0;
    for (size_t b = 0; b < nb; ++b) {
        const auto& blk = P.blocks[b];
        if (!blk.hat) continue;
        const Scalar i = blk.idx[0], j = blk.idx[1], k = blk.idx[2];
        const Scalar is = E.star(i), js = E.star(j), ks = E.star(k);
        const Mat& x = blk.basis;
        const Mat& y = P.blocks[size_t(P.partner[b])].basis;
        Mat Wks = E.w(ks).inverse(), Wjs = E.w(js).inverse(), Wis = E.w(is).inverse();
        Vec yp = Vec::Zero(r * r * r), xp = Vec::Zero(r * r * r);
        for (int ab = 0; ab < r * r; ++ab)
            for (int g = 0; g < r; ++g) {
                Scalar s = 0;
                for (int c = 0; c < r; ++c) s += y(ab, c) * Wks(g, c);
                yp(ab * r + g) = s;
            }
        for (int c = 0; c < r; ++c)
            for (int b2 = 0; b2 < r; ++b2)
                for (int a2 = 0; a2 < r; ++a2) {
                    Scalar s = 0;
                    for (int a = 0; a < r; ++a)
                        for (int be = 0; be < r; ++be) s += x(c, a * r + be) * Wjs(b2, be) * Wis(a2, a);
                    xp(c * r * r + b2 * r + a2) = s;
                }
        Scalar lhs = E.theta(i, j, ks, yp, xp);
        Scalar rhs = E.d(k) * P.gram[b];
        pc = std::max(pc, rel(lhs, rhs));
    }
    add("(y', x')_{i,j,k*} = d(k) <x, y>", pc);
    return out;
}

std::vector<int> b_consistency_dims(SixJEngine& E, double g1, double g2) {
    const RootData& rd = E.root();
    std::vector<int> out;
    for (Scalar k : state_reps(rd, frac(g1 + g2))) {
        int total = 0;
        for (Scalar i1 : state_reps(rd, frac(g1)))
            for (Scalar i2 : state_reps(rd, frac(g2))) total += int(intertwiners(E, false, i1, i2, k).size());
        out.push_back(total);
    }
    return out;
}

} // namespace qtv
