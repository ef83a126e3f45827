#include <qtv/sixj.hpp>

#include <cmath>
#include <mutex>

namespace qtv {

namespace {

bool label_less(Scalar x, Scalar y) {
    if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
    if (std::abs(x.imag() - y.imag()) > 1e-9) return x.imag() < y.imag();
    return false;
}


bool triple_less(const Triple& a, const Triple& b) {
    for (int t = 0; t < 3; ++t) {
        if (label_less(a[t], b[t])) return true;
        if (label_less(b[t], a[t])) return false;
    }
    return false;
}

bool triple_eq(const Triple& a, const Triple& b) { return !triple_less(a, b) && !triple_less(b, a); }

Triple rotate(const Triple& t) { return {t[1], t[2], t[0]}; }

// nonzero entries of each row of a monomial-like matrix
using Sparse = std::vector<std::vector<std::pair<int, Scalar>>>;

Sparse rows_of(const Mat& P) {
    Sparse s(size_t(P.rows()));
    const double tol = 1e-14 * std::max(1.0, P.cwiseAbs().maxCoeff());
    for (int a = 0; a < P.rows(); ++a)
        for (int b = 0; b < P.cols(); ++b)
            if (std::abs(P(a, b)) > tol) s[size_t(a)].emplace_back(b, P(a, b));
    return s;
}

void normalize_phase(Vec& v) {
    double mx = v.cwiseAbs().maxCoeff();
    for (Eigen::Index p = 0; p < v.size(); ++p)
        if (std::abs(v(p)) >= mx * (1 - 1e-9)) {
            v *= std::conj(v(p)) / std::abs(v(p));
            return;
        }
}

} // namespace

SixJEngine::SixJEngine(const RootData& rd) : rd_(rd) {}

SixJEngine::Key SixJEngine::key(std::initializer_list<Scalar> xs) const {
    Key k;
    for (Scalar x : xs) {
        Scalar c = canon(x);
        k.push_back(std::llround(c.real() * 1e9));
        k.push_back(std::llround(c.imag() * 1e9));
    }
    // r * 1e9 and 0 name the same class
    for (size_t t = 0; t < k.size(); t += 2)
        if (k[t] == std::llround(rd_.r * 1e9)) k[t] = 0;
    return k;
}

Scalar SixJEngine::star(Scalar a) const {
    Key k = key({a});
    {
        std::shared_lock lk(mu_);
        auto it = star_.find(k);
        if (it != star_.end()) return it->second;
    }
    Scalar v = dual_weight(rd_, canon(a));
    std::unique_lock lk(mu_);
    star_.try_emplace(k, v);
    return v;
}

Scalar SixJEngine::d(Scalar a) const {
    Key k = key({a});
    {
        std::shared_lock lk(mu_);
        auto it = d_.find(k);
        if (it != d_.end()) return it->second;
    }
    Scalar v = mdim(rd_, canon(a));
    std::unique_lock lk(mu_);
    d_.try_emplace(k, v);
    return v;
}

Triple SixJEngine::dual_triple(const Triple& t) const { return {star(t[2]), star(t[1]), star(t[0])}; }

const TypicalModule& SixJEngine::module(Scalar a) {
    Key k = key({a});
    {
        std::shared_lock lk(mu_);
        auto it = modules_.find(k);
        if (it != modules_.end()) return it->second;
    }
    TypicalModule V = build_typical(rd_, canon(a));
    std::unique_lock lk(mu_);
    return modules_.try_emplace(k, std::move(V)).first->second;
}

const Mat& SixJEngine::w(Scalar a) {
    Key k = key({a});
    {
        std::shared_lock lk(mu_);
        auto it = w_.find(k);
        if (it != w_.end()) return it->second;
    }
    Mat m = dual_data(rd_, canon(a)).w;
    std::unique_lock lk(mu_);
    return w_.try_emplace(k, std::move(m)).first->second;
}

const Mat& SixJEngine::pair(Scalar a) {
    Key k = key({a});
    {
        std::shared_lock lk(mu_);
        auto it = pair_.find(k);
        if (it != pair_.end()) return it->second;
    }
    Mat m = w(a).transpose();
    std::unique_lock lk(mu_);
    return pair_.try_emplace(k, std::move(m)).first->second;
}

MultSpace SixJEngine::mult_basis(Scalar i, Scalar j, Scalar k) {
    MultSpace S{{canon(i), canon(j), canon(k)}, {}};
    const TypicalModule &Vi = module(i), &Vj = module(j), &Vk = module(k);
    const int r = rd_.r, n = r * r * r;
    std::vector<int> cols;
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c)
                if (std::abs(Vi.kw[size_t(a)] * Vj.kw[size_t(b)] * Vk.kw[size_t(c)] - 1.0) < 1e-8)
                    cols.push_back(a * r * r + b * r + c);
    if (cols.empty()) return S;

    // columns of E3 and F3 on the weight subspace, from the sparse factor actions
    const Action &A = Vi.act, &B = Vj.act, &C = Vk.act;
    const int r2 = r * r;
    Mat M = Mat::Zero(2 * n, Eigen::Index(cols.size()));
    for (size_t t = 0; t < cols.size(); ++t) {
        const int a = cols[t] / r2, b = (cols[t] / r) % r, c = cols[t] % r;
        const Eigen::Index col = Eigen::Index(t);
        for (int x = 0; x < r; ++x) {
            // E3 = 1 1 E + 1 E K + E K K
            if (C.E(x, c) != Scalar(0)) M(a * r2 + b * r + x, col) += C.E(x, c);
            if (B.E(x, b) != Scalar(0)) M(a * r2 + x * r + c, col) += B.E(x, b) * C.K(c, c);
            if (A.E(x, a) != Scalar(0)) M(x * r2 + b * r + c, col) += A.E(x, a) * B.K(b, b) * C.K(c, c);
            // F3 = K^-1 K^-1 F + K^-1 F 1 + F 1 1
            if (C.F(x, c) != Scalar(0)) M(n + a * r2 + b * r + x, col) += A.Kinv(a, a) * B.Kinv(b, b) * C.F(x, c);
            if (B.F(x, b) != Scalar(0)) M(n + a * r2 + x * r + c, col) += A.Kinv(a, a) * B.F(x, b);
            if (A.F(x, a) != Scalar(0)) M(n + x * r2 + b * r + c, col) += A.F(x, a);
        }
    }
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const Eigen::Index m = Eigen::Index(cols.size());
    for (Eigen::Index c = 0; c < m; ++c) {
        double s = c < sv.size() ? sv(c) : 0.0;
        if (s > 1e-7 * smax) continue;
        Vec v = Vec::Zero(n);
        for (size_t t = 0; t < cols.size(); ++t) v(cols[t]) = svd.matrixV()(Eigen::Index(t), c);
        normalize_phase(v);
        S.basis.push_back(std::move(v));
    }
    return S;
}

int SixJEngine::dim(Scalar i, Scalar j, Scalar k) { return mult_basis(i, j, k).dim(); }

Triple SixJEngine::canonical_rotation(const Triple& t) const {
    Triple best = t, cur = t;
    for (int s = 0; s < 2; ++s) {
        cur = rotate(cur);
        if (triple_less(cur, best)) best = cur;
    }
    return best;
}

bool SixJEngine::same_class(const Triple& a, const Triple& b) const {
    Triple ca{canon(a[0]), canon(a[1]), canon(a[2])}, cb{canon(b[0]), canon(b[1]), canon(b[2])};
    return triple_eq(canonical_rotation(ca), canonical_rotation(cb));
}

Vec SixJEngine::sigma(Scalar i, Scalar, Scalar, const Vec& x) {
    const TypicalModule& Vi = module(i);
    const int r = rd_.r;
    Vec y = Vec::Zero(x.size());
    for (int a = 0; a < r; ++a) {
        Scalar f = std::pow(Vi.kw[size_t(a)], r - 1);
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) y(b * r * r + c * r + a) = f * x(a * r * r + b * r + c);
    }
    return y;
}

Vec SixJEngine::basis(Scalar i, Scalar j, Scalar k) {
    Triple t{canon(i), canon(j), canon(k)};
    Triple c = canonical_rotation(t);
    Key kc = key({c[0], c[1], c[2]});
    Vec v;
    bool found = false;
    {
        std::shared_lock lk(mu_);
        auto it = basis_.find(kc);
        if (it != basis_.end()) {
            v = it->second;
            found = true;
        }
    }
    if (!found) {
        MultSpace S = mult_basis(c[0], c[1], c[2]);
        if (S.dim() > 1)
            throw Error(ErrorKind::InvalidInput, "multiplicity space of dimension > 1 is not supported");
        if (S.dim() == 1) v = S.basis[0];
        std::unique_lock lk(mu_);
        basis_.try_emplace(kc, v);
    }
    if (v.size() == 0) return v;
    Triple cur = c;
    for (int s = 0; s < 3 && !triple_eq(cur, t); ++s) {
        v = sigma(cur[0], cur[1], cur[2], v);
        cur = rotate(cur);
    }
    return v;
}

Scalar SixJEngine::theta(Scalar i, Scalar j, Scalar k, const Vec& x, const Vec& y) {
    const int r = rd_.r;
    const TypicalModule& Vi = module(i);
    Sparse Pi = rows_of(pair(i)), Pj = rows_of(pair(j)), Pk = rows_of(pair(k));
    Scalar acc = 0;
    for (int a = 0; a < r; ++a) {
        Scalar f = std::pow(Vi.kw[size_t(a)], r - 1), part = 0;
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) {
                Scalar xv = x(a * r * r + b * r + c);
                if (xv == Scalar(0)) continue;
                for (auto [c2, pk] : Pk[size_t(c)])
                    for (auto [b2, pj] : Pj[size_t(b)])
                        for (auto [a2, pi] : Pi[size_t(a)]) part += xv * pk * pj * pi * y(c2 * r * r + b2 * r + a2);
            }
        acc += f * part;
    }
    return d(i) * acc / double(r);
}

Scalar SixJEngine::theta(Scalar i, Scalar j, Scalar k) {
    Key kk = key({i, j, k});
    {
        std::shared_lock lk(mu_);
        auto it = theta_.find(kk);
        if (it != theta_.end()) return it->second;
    }
    Vec x = basis(i, j, k), y = basis(star(k), star(j), star(i));
    Scalar v = (x.size() == 0 || y.size() == 0) ? Scalar(0) : theta(i, j, k, x, y);
    std::unique_lock lk(mu_);
    theta_.try_emplace(kk, v);
    return v;
}

// Gamma cut open along the i edge; see gamma_diagram for the same network as
// a Morse word
Scalar SixJEngine::sixj_compute(const Triple& tC, const Triple& tD, const Triple& tB, const Triple& tA) {
    const int r = rd_.r, r2 = r * r;
    Vec hC = basis(tC[0], tC[1], tC[2]), hD = basis(tD[0], tD[1], tD[2]);
    Vec hB = basis(tB[0], tB[1], tB[2]), hA = basis(tA[0], tA[1], tA[2]);
    if (!hC.size() || !hD.size() || !hB.size() || !hA.size()) return 0;
    const Scalar i = tC[0], j = tC[1], ks = tC[2], l = tD[1], ms = tD[2], n = tB[2];
    Sparse Pks = rows_of(pair(ks)), Pl = rows_of(pair(l)), Pj = rows_of(pair(j));
    Sparse Pms = rows_of(pair(ms)), Pn = rows_of(pair(n)), Pi = rows_of(pair(i));

    // hC' = hC contracted with the k-edge pairing, then glued to hD
    std::vector<Scalar> hCp(size_t(r2 * r), 0);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            for (int c = 0; c < r; ++c) {
                Scalar v = hC(a * r2 + b * r + c);
                if (v == Scalar(0)) continue;
                for (auto [c2, p] : Pks[size_t(c)]) hCp[size_t(a * r2 + b * r + c2)] += v * p;
            }
    // G[delta, beta, nu] = sum P_l P_j hB
    std::vector<Scalar> G(size_t(r2 * r), 0);
    for (int dl = 0; dl < r; ++dl)
        for (int be = 0; be < r; ++be)
            for (auto [dl2, pl] : Pl[size_t(dl)])
                for (auto [be2, pj] : Pj[size_t(be)])
                    for (int nu = 0; nu < r; ++nu)
                        G[size_t(dl * r2 + be * r + nu)] += pl * pj * hB(dl2 * r2 + be2 * r + nu);
    // T[alpha, nu, mu]
    std::vector<Scalar> T(size_t(r2 * r), 0);
    for (int al = 0; al < r; ++al)
        for (int nu = 0; nu < r; ++nu)
            for (int mu = 0; mu < r; ++mu) {
                Scalar s = 0;
                for (auto [mu2, pm] : Pms[size_t(mu)])
                    for (auto [nu2, pn] : Pn[size_t(nu)])
                        for (auto [al2, pi] : Pi[size_t(al)]) s += pm * pn * pi * hA(mu2 * r2 + nu2 * r + al2);
                T[size_t(al * r2 + nu * r + mu)] = s;
            }
    // Bv[alpha, nu, mu] = sum_{beta, c, delta} hC'[alpha, beta, c] hD[c, delta, mu] G[delta, beta, nu]
    const TypicalModule& Vi = module(i);
    Scalar acc = 0;
    for (int al = 0; al < r; ++al) {
        std::vector<Scalar> Bv(size_t(r2), 0);
        for (int be = 0; be < r; ++be)
            for (int c = 0; c < r; ++c) {
                Scalar x = hCp[size_t(al * r2 + be * r + c)];
                if (x == Scalar(0)) continue;
                for (int dl = 0; dl < r; ++dl)
                    for (int mu = 0; mu < r; ++mu) {
                        Scalar y = hD(c * r2 + dl * r + mu);
                        if (y == Scalar(0)) continue;
                        for (int nu = 0; nu < r; ++nu) Bv[size_t(nu * r + mu)] += x * y * G[size_t(dl * r2 + be * r + nu)];
                    }
            }
        Scalar part = 0;
        for (int nu = 0; nu < r; ++nu)
            for (int mu = 0; mu < r; ++mu) part += Bv[size_t(nu * r + mu)] * T[size_t(al * r2 + nu * r + mu)];
        acc += std::pow(Vi.kw[size_t(al)], r - 1) * part;
    }
    (void)l;
    return d(i) * acc / double(r);
}

Scalar SixJEngine::sixj(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n) {
    Key kk = key({i, j, k, l, m, n});
    {
        std::shared_lock lk(mu_);
        auto it = sixj_.find(kk);
        if (it != sixj_.end()) return it->second;
    }
    i = canon(i), j = canon(j), k = canon(k), l = canon(l), m = canon(m), n = canon(n);
    Scalar v = sixj_compute({i, j, star(k)}, {k, l, star(m)}, {star(l), star(j), n}, {m, star(n), star(i)});
    std::unique_lock lk(mu_);
    sixj_.try_emplace(kk, v);
    return v;
}

MultTensor SixJEngine::sixj_tensor(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n) {
    i = canon(i), j = canon(j), k = canon(k), l = canon(l), m = canon(m), n = canon(n);
    return {{{m, star(n), star(i)}, {n, star(l), star(j)}, {i, j, star(k)}, {k, l, star(m)}},
            sixj(i, j, k, l, m, n)};
}

MultTensor SixJEngine::identity_tensor(Scalar a, Scalar b, Scalar c) {
    Triple t{canon(a), canon(b), canon(c)};
    return {{t, dual_triple(t)}, theta(t[0], t[1], t[2])};
}

MultTensor SixJEngine::contract(const std::vector<MultTensor>& ts, const std::vector<PairStep>& plan) {
    std::vector<std::vector<bool>> used(ts.size());
    for (size_t t = 0; t < ts.size(); ++t) used[t].assign(ts[t].factors.size(), false);
    Scalar value = 1;
    for (const auto& t : ts) value *= t.value;
    for (const auto& p : plan) {
        if (p.a < 0 || p.b < 0 || size_t(p.a) >= ts.size() || size_t(p.b) >= ts.size())
            throw Error(ErrorKind::Plan, "tensor index out of range");
        const auto &fa = ts[size_t(p.a)].factors, &fb = ts[size_t(p.b)].factors;
        if (p.fa < 0 || p.fb < 0 || size_t(p.fa) >= fa.size() || size_t(p.fb) >= fb.size())
            throw Error(ErrorKind::Plan, "factor index out of range");
        if (used[size_t(p.a)][size_t(p.fa)] || used[size_t(p.b)][size_t(p.fb)])
            throw Error(ErrorKind::Plan, "factor contracted twice");
        const Triple &x = fa[size_t(p.fa)], &y = fb[size_t(p.fb)];
        if (!same_class(y, dual_triple(x))) throw Error(ErrorKind::Plan, "contracted factors are not a matched pair");
        used[size_t(p.a)][size_t(p.fa)] = used[size_t(p.b)][size_t(p.fb)] = true;
        if (value == Scalar(0)) continue;
        Scalar th = theta(x[0], x[1], x[2]);
        if (th == Scalar(0)) throw Error(ErrorKind::Plan, "contraction along a zero multiplicity space");
        value /= th;
    }
    MultTensor out;
    out.value = value;
    for (size_t t = 0; t < ts.size(); ++t)
        for (size_t f = 0; f < ts[t].factors.size(); ++f)
            if (!used[t][f]) out.factors.push_back(ts[t].factors[f]);
    return out;
}

// ---------------------------------------------------------------- diagrams

RibbonDiagram SixJEngine::gamma_diagram(Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar n) {
    i = canon(i), j = canon(j), k = canon(k), l = canon(l), m = canon(m), n = canon(n);
    const Scalar is = star(i), js = star(j), ks = star(k), ls = star(l), ms = star(m), ns = star(n);
    auto vec = [&](Scalar a, Scalar b, Scalar c) {
        Vec v = basis(a, b, c);
        if (!v.size()) throw Error(ErrorKind::InvalidInput, "zero multiplicity space in Gamma");
        return Mat(v);
    };
    auto pairing = [&](std::vector<Slice>& s, int p, Scalar a) {
        s.push_back(Slice::coupon(p, 1, {{star(a), true}}, w(a)));
        s.push_back(Slice::cap(p));
    };
    RibbonDiagram D;
    auto& s = D.slices;
    s.push_back(Slice::coupon(0, 0, {{i, false}, {j, false}, {ks, false}}, vec(i, j, ks)));
    s.push_back(Slice::coupon(3, 0, {{k, false}, {l, false}, {ms, false}}, vec(k, l, ms)));
    pairing(s, 2, ks);
    s.push_back(Slice::coupon(3, 0, {{ls, false}, {js, false}, {n, false}}, vec(ls, js, n)));
    pairing(s, 2, l);
    pairing(s, 1, j);
    s.push_back(Slice::coupon(3, 0, {{m, false}, {ns, false}, {is, false}}, vec(m, ns, is)));
    pairing(s, 2, ms);
    pairing(s, 1, n);
    pairing(s, 0, i);
    return D;
}

RibbonDiagram SixJEngine::theta_diagram(Scalar i, Scalar j, Scalar k) {
    i = canon(i), j = canon(j), k = canon(k);
    Vec x = basis(i, j, k), y = basis(star(k), star(j), star(i));
    if (!x.size() || !y.size()) throw Error(ErrorKind::InvalidInput, "zero multiplicity space in theta");
    return catalog::theta(rd_, i, j, k, x, y);
}

// ---------------------------------------------------------------- identities

double random_degree(std::mt19937_64& rng, double margin) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        double t = u(rng);
        if (std::abs(t) > margin && std::abs(t - 0.5) > margin && std::abs(t - 1) > margin) return t;
    }
}

namespace {

double rel_residual(Scalar lhs, Scalar rhs, double scale) {
    double s = std::max({std::abs(lhs), std::abs(rhs), scale, 1e-300});
    return std::abs(lhs - rhs) / s;
}

// value of b on the tensor with factors permuted into the order of a
bool same_factors(SixJEngine& E, std::vector<Triple> a, std::vector<Triple> b) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        bool hit = false;
        for (size_t t = 0; t < b.size(); ++t)
            if (E.same_class(x, b[t])) {
                b.erase(b.begin() + long(t));
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

} // namespace

IdentityResidual check_BE(SixJEngine& E, const std::array<Scalar, 9>& jj) {
    const auto& j = jj;
    double g = degree(j[2]) + degree(j[3]);
    std::vector<Scalar> js = state_reps(E.root(), g);
    Scalar lhs = 0;
    double scale = 0;
    std::vector<Triple> lf;
    for (Scalar x : js) {
        MultTensor t1 = E.sixj_tensor(j[1], j[2], j[5], j[3], j[6], x);
        MultTensor t2 = E.sixj_tensor(j[1], x, j[6], j[4], j[0], j[7]);
        MultTensor t3 = E.sixj_tensor(j[2], j[3], x, j[4], j[7], j[8]);
        // *_{j2 j3 x*}: t3 factor 2 with t1 factor 1; *_{x j4 j7*}: t3 factor 3 with t2 factor 1;
        // *_{j1 x j6*}: t2 factor 2 with t1 factor 0
        MultTensor c = E.contract({t1, t2, t3}, {{2, 2, 0, 1}, {2, 3, 1, 1}, {1, 2, 0, 0}});
        Scalar term = E.d(x) * c.value;
        lhs += term;
        scale = std::max(scale, std::abs(term));
        lf = c.factors;
    }
    MultTensor u1 = E.sixj_tensor(j[5], j[3], j[6], j[4], j[0], j[8]);
    MultTensor u2 = E.sixj_tensor(j[1], j[2], j[5], j[8], j[0], j[7]);
    MultTensor rc = E.contract({u1, u2}, {{1, 3, 0, 0}});
    if (!same_factors(E, lf, rc.factors))
        throw Error(ErrorKind::Plan, "both sides of the identity live in different spaces");
    return {rel_residual(lhs, rc.value, scale), lhs, rc.value};
}

IdentityResidual check_orth(SixJEngine& E, Scalar i, Scalar j, Scalar k, Scalar l, Scalar m, Scalar p) {
    double g = degree(j) + degree(l);
    Scalar lhs = 0;
    double scale = 0;
    std::vector<Triple> lf;
    for (Scalar n : state_reps(E.root(), g)) {
        MultTensor t1 = E.sixj_tensor(i, j, p, l, m, n);
        MultTensor t2 = E.sixj_tensor(k, E.star(j), i, n, m, l);
        // *_{i n m*}: t2 factor 3 with t1 factor 0; *_{j l n*}: t2 factor 1 with t1 factor 1
        MultTensor c = E.contract({t1, t2}, {{1, 3, 0, 0}, {1, 1, 0, 1}});
        Scalar term = E.d(k) * E.d(n) * c.value;
        lhs += term;
        scale = std::max(scale, std::abs(term));
        lf = c.factors;
    }
    Scalar rhs = 0;
    if (std::abs(E.canon(k) - E.canon(p)) < 1e-9) {
        MultTensor id1 = E.identity_tensor(i, j, E.star(k)), id2 = E.identity_tensor(k, l, E.star(m));
        rhs = id1.value * id2.value;
        std::vector<Triple> rf = {id1.factors[0], id2.factors[0], id1.factors[1], id2.factors[1]};
        if (!same_factors(E, lf, rf))
            throw Error(ErrorKind::Plan, "both sides of the identity live in different spaces");
    }
    return {rel_residual(lhs, rhs, scale), lhs, rhs};
}

IdentityResidual check_bubble(SixJEngine& E, Scalar i, Scalar j, Scalar k, double g4, double g5, double g6) {
    const Scalar bb = E.b();
    Scalar lhs = 0;
    double scale = 0;
    std::vector<Triple> lf;
    auto Ls = state_reps(E.root(), g4), Ms = state_reps(E.root(), g5), Ns = state_reps(E.root(), g6);
    for (Scalar l : Ls)
        for (Scalar m : Ms)
            for (Scalar n : Ns) {
                MultTensor t1 = E.sixj_tensor(i, j, k, l, m, n);
                if (t1.value == Scalar(0)) continue;
                MultTensor t2 = E.sixj_tensor(k, E.star(j), i, n, m, l);
                // *_{k l m*}: t1 factor 3 with t2 factor 0; *_{i n m*}: t2 factor 3 with t1 factor 0;
                // *_{j l n*}: t2 factor 1 with t1 factor 1
                MultTensor c = E.contract({t1, t2}, {{0, 3, 1, 0}, {1, 3, 0, 0}, {1, 1, 0, 1}});
                Scalar term = E.d(k) * E.d(n) * bb * bb * c.value;
                lhs += term;
                scale = std::max(scale, std::abs(term));
                lf = c.factors;
            }
    MultTensor id = E.identity_tensor(i, j, E.star(k));
    if (!lf.empty() && !same_factors(E, lf, id.factors))
        throw Error(ErrorKind::Plan, "both sides of the identity live in different spaces");
    Scalar rhs = bb * id.value;
    return {rel_residual(lhs, rhs, scale), lhs, rhs};
}

} // namespace qtv
