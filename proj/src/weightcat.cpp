#include <qtv/weightcat.hpp>

#include <algorithm>
#include <set>

namespace qtv {

namespace {

constexpr double kAtypicalEps = 1e-6;

Mat diag(const std::vector<Scalar>& v) {
    Mat m = Mat::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
    for (size_t i = 0; i < v.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = v[i];
    return m;
}

// q^x == 1 within the atypicality margin (x measured in half units)
bool hits_unity(const RootData& rd, Scalar x) {
    if (std::abs(x.imag()) > 2 * kAtypicalEps) return false;
    return lattice_dist(x.real() / 2, rd.r / 2.0) < kAtypicalEps;
}

} // namespace

Mat kron(const Mat& A, const Mat& B) {
    Mat R(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            R.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return R;
}

Mat swap_matrix(int dv, int dw) {
    Mat P = Mat::Zero(dv * dw, dv * dw);
    for (int i = 0; i < dv; ++i)
        for (int j = 0; j < dw; ++j) P(j * dv + i, i * dw + j) = 1;
    return P;
}

Action tensor(const Action& V, const Action& W) {
    Mat Iv = Mat::Identity(V.dim(), V.dim()), Iw = Mat::Identity(W.dim(), W.dim());
    Action T;
    T.E = kron(Iv, W.E) + kron(V.E, W.K);
    T.F = kron(V.Kinv, W.F) + kron(V.F, Iw);
    T.K = kron(V.K, W.K);
    T.Kinv = kron(V.Kinv, W.Kinv);
    T.H = kron(V.H, Iw) + kron(Iv, W.H);
    return T;
}

// ---------------------------------------------------------------- root data

RootSystemData RootSystemData::from_cartan(const Eigen::MatrixXd& A, const Eigen::VectorXd& d) {
    RootSystemData rs;
    rs.n = int(A.rows());
    rs.A = A;
    rs.d = d;
    rs.form_roots = d.asDiagonal() * A;
    Eigen::MatrixXd D = d.asDiagonal();
    rs.form_weights = D * rs.form_roots.inverse() * D;

    auto less = [](const Eigen::VectorXi& x, const Eigen::VectorXi& y) {
        return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                            y.data() + y.size());
    };
    std::set<Eigen::VectorXi, decltype(less)> seen(less);
    std::vector<Eigen::VectorXi> todo;
    for (int i = 0; i < rs.n; ++i) {
        Eigen::VectorXi e = Eigen::VectorXi::Zero(rs.n);
        e(i) = 1;
        seen.insert(e);
        todo.push_back(e);
    }
    while (!todo.empty()) {
        Eigen::VectorXi b = todo.back();
        todo.pop_back();
        for (int i = 0; i < rs.n; ++i) {
            int c = 0;
            for (int j = 0; j < rs.n; ++j) c += int(std::lround(A(i, j))) * b(j);
            Eigen::VectorXi s = b;
            s(i) -= c;
            if (seen.insert(s).second) todo.push_back(s);
        }
    }
    for (const auto& b : seen)
        if ((b.array() >= 0).all()) rs.pos_roots.push_back(b);
    return rs;
}

RootSystemData RootSystemData::sl2() {
    Eigen::MatrixXd A(1, 1);
    A << 2;
    Eigen::VectorXd d(1);
    d << 1;
    return from_cartan(A, d);
}

Scalar RootSystemData::pair_ww(const Eigen::VectorXcd& l, const Eigen::VectorXcd& m) const {
    return (l.transpose() * form_weights.cast<Scalar>() * m)(0, 0);
}

Scalar RootSystemData::pair_wr(const Eigen::VectorXcd& l, const Eigen::VectorXi& beta) const {
    Scalar s = 0;
    for (int j = 0; j < n; ++j) s += l(j) * d(j) * double(beta(j));
    return s;
}

double RootSystemData::pair_rr(const Eigen::VectorXi& b, const Eigen::VectorXi& c) const {
    return (b.cast<double>().transpose() * form_roots * c.cast<double>())(0, 0);
}

Eigen::VectorXcd RootSystemData::rho() const { return Eigen::VectorXcd::Ones(n); }

// ---------------------------------------------------------------- degrees

bool is_typical(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l) {
    Eigen::VectorXcd lr = l + rs.rho();
    for (const auto& beta : rs.pos_roots) {
        Scalar base = 2.0 * rs.pair_wr(lr, beta);
        double bb = rs.pair_rr(beta, beta);
        for (int m = 0; m < rd.r; ++m)
            if (hits_unity(rd, base + double(m) * bb)) return false;
    }
    return true;
}

bool is_typical(const RootData& rd, Scalar a) {
    if (!finite(a)) return false;
    Eigen::VectorXcd l(1);
    l << a;
    return is_typical(rd, RootSystemData::sl2(), l);
}

bool is_admissible_degree(const RootData&, double t, double eps_adm) {
    if (!std::isfinite(t)) return false;
    return lattice_dist(t, 0.5) > eps_adm;
}

double degree(Scalar a) { return frac(a.real()); }

Scalar canonical_rep(const RootData& rd, Scalar a) {
    double re = std::fmod(a.real(), double(rd.r));
    if (re < 0) re += rd.r;
    if (re >= rd.r - 1e-12 && std::abs(re - rd.r) < 1e-12) re = 0;
    return {re, a.imag()};
}

std::vector<Scalar> state_reps(const RootData& rd, double t) {
    if (!is_admissible_degree(rd, t))
        throw Error(ErrorKind::Inadmissible, "degree " + std::to_string(t) + " is not admissible");
    double t0 = frac(t);
    std::vector<Scalar> reps;
    for (int k = 0; k < rd.r; ++k) reps.emplace_back(t0 + k, 0.0);
    return reps;
}

// ---------------------------------------------------------------- modules

TypicalModule build_typical(const RootData& rd, Scalar a) {
    if (!is_typical(rd, a))
        throw Error(ErrorKind::DegenerateParameter, "weight is not typical");
    const int r = rd.r;
    TypicalModule V;
    V.a = a;
    V.dual = false;
    V.act.E = Mat::Zero(r, r);
    V.act.F = Mat::Zero(r, r);
    for (int p = 0; p + 1 < r; ++p) V.act.F(p + 1, p) = 1;
    for (int p = 1; p < r; ++p)
        V.act.E(p - 1, p) = qnum(rd, double(p)) * qnum(rd, a - double(p) + 1.0);
    for (int p = 0; p < r; ++p) {
        V.hw.push_back(a - 2.0 * p);
        V.kw.push_back(q_pow(rd, a - 2.0 * p));
    }
    V.act.H = diag(V.hw);
    V.act.K = diag(V.kw);
    std::vector<Scalar> inv;
    for (auto k : V.kw) inv.push_back(1.0 / k);
    V.act.Kinv = diag(inv);
    return V;
}

TypicalModule dual_module(const RootData&, const TypicalModule& V) {
    if (V.dual) throw Error(ErrorKind::InvalidInput, "double duals are not modelled");
    TypicalModule D;
    D.a = V.a;
    D.dual = true;
    D.act.E = (-(V.act.E * V.act.Kinv)).transpose();
    D.act.F = (-(V.act.K * V.act.F)).transpose();
    D.act.K = V.act.Kinv.transpose();
    D.act.Kinv = V.act.K.transpose();
    D.act.H = -V.act.H.transpose();
    for (int p = 0; p < V.dim(); ++p) {
        D.hw.push_back(-V.hw[p]);
        D.kw.push_back(1.0 / V.kw[p]);
    }
    return D;
}

TypicalModule make_module(const RootData& rd, Obj o) {
    TypicalModule V = build_typical(rd, o.a);
    return o.dual ? dual_module(rd, V) : V;
}

RelationResiduals relation_residuals(const RootData& rd, const TypicalModule& V) {
    const Action& X = V.act;
    const int n = V.dim();
    Mat I = Mat::Identity(n, n);
    Scalar q = rd.q, q2 = q * q;
    RelationResiduals res{};
    auto nrm = [](const Mat& m) { return m.cwiseAbs().maxCoeff(); };
    res.kek = nrm(X.K * X.E * X.Kinv - q2 * X.E);
    res.kfk = nrm(X.K * X.F * X.Kinv - X.F / q2);
    res.ef = nrm(X.E * X.F - X.F * X.E - (X.K - X.Kinv) / (q - 1.0 / q));
    res.hrel = std::max(nrm(X.H * X.E - X.E * X.H - 2.0 * X.E), nrm(X.H * X.F - X.F * X.H + 2.0 * X.F));
    Mat Er = I, Fr = I;
    for (int i = 0; i < rd.r; ++i) {
        Er = Er * X.E;
        Fr = Fr * X.F;
    }
    res.er = nrm(Er);
    res.fr = nrm(Fr);
    Mat qH = Mat::Zero(n, n);
    for (int p = 0; p < n; ++p) qH(p, p) = q_pow(rd, V.hw[p]);
    res.kh = std::max({nrm(X.K - qH), nrm(X.K * X.Kinv - I), nrm(X.H - X.H.diagonal().asDiagonal().toDenseMatrix())});
    return res;
}

double RelationResiduals::max() const { return std::max({kek, kfk, ef, hrel, er, fr, kh}); }

// ---------------------------------------------------------------- braiding

Mat r_matrix(const RootData& rd, const TypicalModule& V, const TypicalModule& W) {
    const int dv = V.dim(), dw = W.dim();
    Mat Rt = Mat::Zero(dv * dw, dv * dw);
    Mat En = Mat::Identity(dv, dv), Fn = Mat::Identity(dw, dw);
    Scalar q = rd.q, qq = q - 1.0 / q, qqn = 1;
    for (int n = 0; n < rd.r; ++n) {
        Rt += (qqn / qfact_alt(n, 1.0 / (q * q))) * kron(En, Fn);
        En = En * V.act.E;
        Fn = Fn * W.act.F;
        qqn *= qq;
    }
    Mat R(dv * dw, dv * dw);
    for (int i = 0; i < dv; ++i)
        for (int j = 0; j < dw; ++j)
            R.row(i * dw + j) = q_pow(rd, V.hw[i] * W.hw[j] / 2.0) * Rt.row(i * dw + j);
    return R;
}

Mat r_matrix_inverse(const RootData& rd, const TypicalModule& V, const TypicalModule& W) {
    return r_matrix(rd, V, W).partialPivLu().inverse();
}

Mat braiding(const RootData& rd, const TypicalModule& V, const TypicalModule& W) {
    return swap_matrix(V.dim(), W.dim()) * r_matrix(rd, V, W);
}

// inverse of c_{V,W}, mapping W(x)V -> V(x)W
Mat braiding_inverse(const RootData& rd, const TypicalModule& V, const TypicalModule& W) {
    return r_matrix_inverse(rd, V, W) * swap_matrix(W.dim(), V.dim());
}

Scalar twist_scalar(const RootData& rd, Scalar a) {
    if (!is_typical(rd, a)) throw Error(ErrorKind::DegenerateParameter, "weight is not typical");
    return q_pow(rd, -a * (a - 2.0 * (rd.r - 1)) / 2.0);
}

// ---------------------------------------------------------------- duality

Mat k_power(const TypicalModule& V, int p) {
    Mat m = Mat::Zero(V.dim(), V.dim());
    for (int i = 0; i < V.dim(); ++i) m(i, i) = std::pow(V.kw[i], p);
    return m;
}

Vec coev(const TypicalModule& V, int) {
    const int n = V.dim();
    Vec v = Vec::Zero(n * n);
    for (int j = 0; j < n; ++j) v(j * n + j) = 1;
    return v;
}

Vec ev(const TypicalModule& V, int) {
    const int n = V.dim();
    Vec v = Vec::Zero(n * n);
    for (int j = 0; j < n; ++j) v(j * n + j) = 1;
    return v;
}

Vec coev_prime(const TypicalModule& V, int r) {
    const int n = V.dim();
    Mat Kp = k_power(V, r - 1);
    Vec v = Vec::Zero(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) v(j * n + i) = Kp(i, j);
    return v;
}

Vec ev_prime(const TypicalModule& V, int r) {
    const int n = V.dim();
    Mat Km = k_power(V, 1 - r);
    Vec v = Vec::Zero(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) v(i * n + j) = Km(j, i);
    return v;
}

Scalar dual_weight(const RootData& rd, Scalar a) {
    TypicalModule D = dual_module(rd, build_typical(rd, a));
    // highest weight vector of V^*: kernel of E^*
    Eigen::JacobiSVD<Mat> svd(D.act.E, Eigen::ComputeFullV);
    Vec v = svd.matrixV().col(D.dim() - 1);
    Eigen::Index p;
    v.cwiseAbs().maxCoeff(&p);
    Scalar h = canonical_rep(rd, (D.act.H * v)(p) / v(p));
    Scalar f = canonical_rep(rd, Scalar(2.0 * (rd.r - 1)) - a);
    if (std::abs(h - f) < 1e-6) return f;
    return h;
}

namespace {

bool key_less(Scalar x, Scalar y) {
    if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
    return x.imag() < y.imag();
}

// w : V_p -> (V_s)^*, highest weight vector to the functional dual to the
// lowest weight vector, extended by the F-action
Mat normalized_w(const RootData& rd, Scalar p, Scalar s) {
    TypicalModule Ds = dual_module(rd, build_typical(rd, s));
    const int r = rd.r;
    Mat w = Mat::Zero(r, r);
    Vec x = Vec::Zero(r);
    x(r - 1) = 1;
    for (int k = 0; k < r; ++k) {
        w.col(k) = x;
        x = Ds.act.F * x;
    }
    (void)p;
    return w;
}

} // namespace

DualData dual_data(const RootData& rd, Scalar a) {
    if (!is_admissible_degree(rd, degree(a)) && std::abs(a.imag()) < 1e-12)
        throw Error(ErrorKind::Inadmissible, "self-dual degree");
    Scalar ac = canonical_rep(rd, a);
    Scalar as = dual_weight(rd, ac);
    if (!key_less(ac, as)) {
        if (!key_less(as, ac)) throw Error(ErrorKind::Inadmissible, "self-dual weight");
        // a is the secondary member of its pair: w_a = w_p^T K^{1-r}
        Mat wp = normalized_w(rd, as, ac);
        TypicalModule Va = build_typical(rd, ac);
        return {as, wp.transpose() * k_power(Va, 1 - rd.r)};
    }
    return {as, normalized_w(rd, ac, as)};
}

// ---------------------------------------------------------------- d, b, S'

Scalar mdim(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l) {
    Eigen::VectorXcd s = l - double(rd.r - 1) * rs.rho();
    Scalar res = 1;
    for (const auto& alpha : rs.pos_roots) {
        Scalar x = rs.pair_wr(s, alpha);
        Scalar den = qbracket(rd, double(rd.r) * x);
        if (std::abs(den) < 1e-9)
            throw Error(ErrorKind::Inadmissible, "modified dimension undefined at this degree");
        res *= qbracket(rd, x) / den;
    }
    return res;
}

Scalar mdim(const RootData& rd, Scalar a) {
    Eigen::VectorXcd l(1);
    l << a;
    return mdim(rd, RootSystemData::sl2(), l);
}

Scalar bconst(const RootData& rd) { return 1.0 / double(rd.r * rd.r); }

Scalar sprime_closed(const RootData& rd, const RootSystemData& rs, const Eigen::VectorXcd& l,
                     const Eigen::VectorXcd& m) {
    if (!is_typical(rd, rs, l))
        throw Error(ErrorKind::DegenerateParameter, "closed component is not typical");
    Eigen::VectorXcd s = m + double(1 - rd.r) * rs.rho();
    Scalar res = q_pow(rd, 2.0 * rs.pair_ww(s, l));
    for (const auto& alpha : rs.pos_roots) {
        Scalar x = -rs.pair_wr(s, alpha); // negative root
        Scalar den = q_pow(rd, 2.0 * x) - 1.0;
        if (std::abs(den) < 1e-9)
            throw Error(ErrorKind::DegenerateParameter, "S' closed form is singular");
        res *= (q_pow(rd, 2.0 * rd.r * x) - 1.0) / den;
    }
    return res;
}

Scalar sprime_closed(const RootData& rd, Scalar a_lambda, Scalar b_mu) {
    Eigen::VectorXcd l(1), m(1);
    l << a_lambda;
    m << b_mu;
    return sprime_closed(rd, RootSystemData::sl2(), l, m);
}

} // namespace qtv
