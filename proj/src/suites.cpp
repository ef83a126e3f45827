#include <qtv/psihat.hpp>
#include <qtv/statesum.hpp>
#include <qtv/suites.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qtv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double nrm(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double rel(Scalar a, Scalar b) {
    double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

struct Sink {
    const SuiteConfig& cfg;
    SuiteReport& rep;
    std::map<std::string, size_t> at; // name -> line, worst value kept

    void add(const std::string& name, double value, double threshold, const std::string& detail = {}) {
        threshold *= cfg.eps_scale;
        auto it = at.find(name);
        if (it == at.end()) {
            at[name] = rep.lines.size();
            rep.lines.push_back({name, value, threshold, false, false, detail});
        } else if (value > rep.lines[it->second].value) {
            rep.lines[it->second].value = value;
            rep.lines[it->second].detail = detail;
        }
    }
    void timing(const std::string& name, double secs, double limit) {
        rep.lines.push_back({name, secs, limit, false, true, {}});
    }
    void exact(const std::string& name, long long mismatch, const std::string& detail = {}) {
        auto it = at.find(name);
        if (it == at.end()) {
            at[name] = rep.lines.size();
            rep.lines.push_back({name, double(mismatch), 0, true, false, detail});
        } else if (double(mismatch) > rep.lines[it->second].value) {
            rep.lines[it->second].value = double(mismatch);
            rep.lines[it->second].detail = detail;
        }
    }
};

std::vector<int> rs_or(const SuiteConfig& cfg, std::vector<int> def) { return cfg.rs.empty() ? def : cfg.rs; }
int samples_or(const SuiteConfig& cfg, int def) { return cfg.samples >= 0 ? cfg.samples : def; }
std::string rtag(int r) { return " r=" + std::to_string(r); }

// typical weight: random admissible degree plus an integer in [0, r)
Scalar random_weight(std::mt19937_64& rng, int r, bool complex_part = false) {
    std::uniform_int_distribution<int> U(0, r - 1);
    std::uniform_real_distribution<double> im(-0.5, 0.5);
    double t = random_degree(rng) + U(rng);
    return {t, complex_part ? im(rng) : 0.0};
}

// Hom_U(V (x) W, X) including H, as r x r^2 matrices
std::vector<Mat> hom_tensor_to(const TypicalModule& V, const TypicalModule& W, const TypicalModule& X) {
    Action P = tensor(V.act, W.act);
    const int r = X.dim(), n = P.dim();
    Mat Ir = Mat::Identity(r, r), In = Mat::Identity(n, n);
    Mat M(3 * r * n, r * n);
    const Mat* gens[3][2] = {{&P.E, &X.act.E}, {&P.F, &X.act.F}, {&P.H, &X.act.H}};
    for (int g = 0; g < 3; ++g)
        M.middleRows(Eigen::Index(g) * r * n, r * n) = kron(gens[g][0]->transpose(), Ir) - kron(In, *gens[g][1]);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    std::vector<Mat> out;
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        double s = c < sv.size() ? sv(c) : 0.0;
        if (s > 1e-8 * sv(0)) continue;
        out.push_back(svd.matrixV().col(c).reshaped(r, n));
    }
    return out;
}

// ------------------------------------------------------------------ suites

void suite_relations(Sink& out) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 50);
    for (int r : rs_or(out.cfg, {3, 5, 7})) {
        RootData rd(r);
        for (int s = 0; s < n; ++s) {
            Scalar a = random_weight(rng, r, s % 2 == 1);
            TypicalModule V = build_typical(rd, a);
            out.add("relations" + rtag(r), relation_residuals(rd, V).max(), 1e-9);
            out.add("relations on duals" + rtag(r), relation_residuals(rd, dual_module(rd, V)).max(), 1e-9);
        }
    }
    out.timing("runtime_s", seconds_since(t0), 10);
}

void suite_ribbon(Sink& out) {
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 4);
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        const std::string tag = rtag(r);
        for (int s = 0; s < n; ++s) {
            Scalar a = random_weight(rng, r), b = random_weight(rng, r), c = random_weight(rng, r);
            TypicalModule V = build_typical(rd, a), W = build_typical(rd, b), U = build_typical(rd, c);
            Mat I = Mat::Identity(r, r);

            Mat lhs = kron(braiding(rd, W, U), I) * kron(I, braiding(rd, V, U)) * kron(braiding(rd, V, W), I);
            Mat rhs = kron(I, braiding(rd, V, W)) * kron(braiding(rd, V, U), I) * kron(I, braiding(rd, W, U));
            out.add("YBE" + tag, nrm(lhs - rhs) / std::max(nrm(lhs), 1e-300), 1e-8);

            // c_{V,W} is a module map
            Mat cvw = braiding(rd, V, W);
            Action A = tensor(V.act, W.act), B = tensor(W.act, V.act);
            double mm = std::max({nrm(cvw * A.E - B.E * cvw), nrm(cvw * A.F - B.F * cvw), nrm(cvw * A.H - B.H * cvw)});
            out.add("braiding is a module map" + tag, mm / nrm(cvw), 1e-8);

            // naturality in the first and second argument along f : V (x) U -> X
            TypicalModule X = build_typical(rd, a + c);
            auto fs = hom_tensor_to(V, U, X);
            if (fs.empty()) throw Error(ErrorKind::InvalidInput, "no intertwiner V (x) U -> V_{a+c}");
            const Mat& f = fs[0];
            Mat c_vu_w = kron(braiding(rd, V, W), I) * kron(I, braiding(rd, U, W));
            Mat nat1 = braiding(rd, X, W) * kron(f, I) - kron(I, f) * c_vu_w;
            Mat c_w_vu = kron(I, braiding(rd, W, U)) * kron(braiding(rd, W, V), I);
            Mat nat2 = braiding(rd, W, X) * kron(I, f) - kron(f, I) * c_w_vu;
            out.add("braiding naturality" + tag, std::max(nrm(nat1), nrm(nat2)) / nrm(f), 1e-8);

            // ribbon axiom for the twist realized by the curl, which is the
            // inverse of the closed-form twist scalar
            RibbonDiagram D;
            D.bottom = {{a, false}, {b, false}};
            D.slices = {Slice::cup(2, {a, false}), Slice::cup(3, {b, false}), Slice::xp(1), Slice::xp(0),
                        Slice::xp(2), Slice::xp(1), Slice::cap(3), Slice::cap(2)};
            Mat curl_vw = evaluate(rd, D).m;
            Scalar curl_v = scalar_of(rd, evaluate(rd, catalog::curl(a, true)));
            Scalar curl_w = scalar_of(rd, evaluate(rd, catalog::curl(b, true)));
            Mat rhs_vw = braiding(rd, W, V) * cvw * (curl_v * curl_w);
            out.add("ribbon axiom" + tag, nrm(curl_vw - rhs_vw) / nrm(rhs_vw), 1e-8);
            out.add("curl equals theta^-1" + tag, rel(curl_v * twist_scalar(rd, a), 1.0), 1e-8);

            // zig-zags for b, d and b', d'
            Vec bV = coev(V, r), dV = ev(V, r), bpV = coev_prime(V, r), dpV = ev_prime(V, r);
            double z = 0;
            z = std::max(z, nrm(kron(I, dV.transpose()) * kron(bV, I) - I));
            z = std::max(z, nrm(kron(dV.transpose(), I) * kron(I, bV) - I));
            z = std::max(z, nrm(kron(dpV.transpose(), I) * kron(I, bpV) - I));
            z = std::max(z, nrm(kron(I, dpV.transpose()) * kron(bpV, I) - I));
            out.add("zig-zag" + tag, z, 1e-8);
        }
    }
}

void suite_sprime(Sink& out) {
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 30);
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        for (int s = 0; s < n; ++s) {
            Scalar a = random_weight(rng, r), b = random_weight(rng, r);
            Scalar diagram = scalar_of(rd, evaluate(rd, catalog::open_hopf(a, b)));
            out.add("S' closed form vs open Hopf link" + rtag(r), rel(diagram, sprime_closed(rd, a, b)), 1e-8);
            out.add("d(V)S'(J,V) = d(J)S'(V,J)" + rtag(r),
                    rel(mdim(rd, b) * sprime_closed(rd, a, b), mdim(rd, a) * sprime_closed(rd, b, a)), 1e-7);
        }
    }
}

void suite_mdim(Sink& out) {
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 30);
    const RootSystemData sl2 = RootSystemData::sl2();
    for (int r : rs_or(out.cfg, {3, 5, 7})) {
        RootData rd(r);
        for (int s = 0; s < n; ++s) {
            Scalar a = random_weight(rng, r, s % 2 == 1);
            Scalar d = mdim(rd, a);
            out.add("d(V) = d(V*)" + rtag(r), rel(d, mdim(rd, dual_weight(rd, a))), 1e-9);
            out.add("d periodic in r" + rtag(r), std::max(rel(d, mdim(rd, a + double(r))), rel(d, mdim(rd, a - double(r)))),
                    1e-9);
            Eigen::VectorXcd l(1);
            l(0) = a;
            out.add("root-data formula agrees" + rtag(r), rel(d, mdim(rd, sl2, l)), 1e-9);
            if (s < 5) {
                Scalar u = gprime(rd, catalog::unknot(a), {1, 0});
                out.add("unknot evaluates to d" + rtag(r), rel(u, d), 1e-9);
            }
        }
    }
}

void suite_ambi(Sink& out) {
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 6);
    int graphs = 0;
    for (int r : rs_or(out.cfg, {3})) {
        RootData rd(r);
        SixJEngine E(rd);
        std::uniform_int_distribution<int> U(0, r - 1);
        auto cut_spread = [&](const RibbonDiagram& G) {
            auto cuts = admissible_cuts(rd, G);
            if (cuts.empty()) throw Error(ErrorKind::Inadmissible, "graph without admissible cut");
            Scalar v0 = gprime(rd, G, cuts[0]);
            double dev = 0;
            for (const auto& c : cuts) dev = std::max(dev, rel(gprime(rd, G, c), v0));
            return dev;
        };
        for (int s = 0; s < n; ++s) {
            double gi = random_degree(rng), gj = random_degree(rng);
            if (!is_admissible_degree(rd, gi + gj, 0.02)) { --s; continue; }
            Scalar i(gi + U(rng), 0), j(gj + U(rng), 0), k(frac(gi + gj) + U(rng), 0);
            // theta graph on (i, j, k*) and the tetrahedral graph
            out.add("theta graph cut independence" + rtag(r), cut_spread(E.theta_diagram(i, j, E.star(k))), 1e-7);
            double gl = random_degree(rng);
            if (!is_admissible_degree(rd, gi + gj + gl, 0.02) || !is_admissible_degree(rd, gj + gl, 0.02)) {
                ++graphs;
                continue;
            }
            Scalar l(gl + U(rng), 0), m(frac(gi + gj + gl) + U(rng), 0), nn(frac(gj + gl) + U(rng), 0);
            out.add("tetrahedral graph cut independence" + rtag(r), cut_spread(E.gamma_diagram(i, j, k, l, m, nn)), 1e-7);
            graphs += 2;
        }
    }
    out.exact("at least 10 graphs checked", graphs >= 10 ? 0 : 10 - graphs, std::to_string(graphs) + " graphs");
}

void suite_sixj(Sink& out) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(out.cfg.seed);
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        SixJEngine E(rd);
        const int n = samples_or(out.cfg, r == 3 ? 100 : 20);
        const std::string tag = rtag(r);
        std::uniform_int_distribution<int> U(0, r - 1);
        auto adm = [&](double t) { return is_admissible_degree(rd, t, 0.02); };
        for (int s = 0; s < n; ++s) {
            double g1 = random_degree(rng), g2 = random_degree(rng), g3 = random_degree(rng), g4 = random_degree(rng);
            double d[9] = {g1 + g2 + g3 + g4, g1, g2, g3, g4, g1 + g2, g1 + g2 + g3, g2 + g3 + g4, g3 + g4};
            if (!std::all_of(d, d + 9, adm) || !adm(g2 + g3)) { --s; continue; }
            std::array<Scalar, 9> j;
            for (int t = 0; t < 9; ++t) j[size_t(t)] = Scalar(frac(d[t]) + U(rng), 0);
            out.add("Biedenharn-Elliott" + tag, check_BE(E, j).residual, 1e-6);
        }
        for (int s = 0; s < n; ++s) {
            double gi = random_degree(rng), gj = random_degree(rng), gl = random_degree(rng);
            if (!adm(gi + gj) || !adm(gi + gj + gl) || !adm(gj + gl)) { --s; continue; }
            Scalar i(gi + U(rng), 0), j(gj + U(rng), 0), l(gl + U(rng), 0);
            int kk = U(rng);
            Scalar k(frac(gi + gj) + kk, 0), m(frac(gi + gj + gl) + U(rng), 0);
            Scalar p(frac(gi + gj) + (kk + 1 + U(rng) % (r - 1)) % r, 0);
            out.add("orthonormality k=p" + tag, check_orth(E, i, j, k, l, m, k).residual, 1e-6);
            out.add("orthonormality k!=p" + tag, check_orth(E, i, j, k, l, m, p).residual, 1e-6);
            out.add("bubble" + tag, check_bubble(E, i, j, k, gl, frac(gi + gj + gl), frac(gj + gl)).residual, 1e-6);
        }
    }
    out.timing("runtime_s", seconds_since(t0), 120);
}

TriangulationFile load_complex(const SuiteConfig& cfg, const std::string& name) {
    auto F = parse_triangulation_json(read_file((std::filesystem::path(cfg.data_dir) / name).string()));
    if (!F.coloring) throw Error(ErrorKind::InvalidInput, name + " has no coloring");
    return F;
}

void suite_tv(Sink& out) {
    auto base = load_complex(out.cfg, "s3_unknot.json");
    auto bub = load_complex(out.cfg, "s3_unknot_bubble.json");
    SumOptions so;
    so.threads = out.cfg.threads;
    std::mt19937_64 rng(out.cfg.seed);
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        SixJEngine E(rd);
        const std::string tag = rtag(r);
        auto t0 = Clock::now();
        Scalar v = tv_sum(E, base.T, *base.coloring, so).value;
        out.timing("2-tetrahedron runtime_s" + tag, seconds_since(t0), r == 3 ? 1 : 10);
        t0 = Clock::now();
        Scalar vb = tv_sum(E, bub.T, *bub.coloring, so).value;
        out.timing("bubble complex runtime_s" + tag, seconds_since(t0), r == 3 ? 1 : 10);
        out.add("TV(2-tetrahedron) = TV(bubble)" + tag, rel(v, vb), 1e-6);
        // fresh bubble from the move engine
        auto B = bubble(base.T, base.T.Y.front(), &*base.coloring, &rng);
        out.add("TV after a generated bubble move" + tag, rel(v, tv_sum(E, B.T, *B.coloring, so).value), 1e-6);
        for (int g = 0; g < 2; ++g) {
            std::uniform_real_distribution<double> u(0, 1);
            Gauge gauge;
            for (int vid : base.T.vertex_ids()) gauge[vid] = u(rng);
            GColoring c = gauge_act(base.T, gauge, *base.coloring);
            if (!is_admissible(c)) c = make_admissible(base.T, c, rng);
            out.add("gauge invariance" + tag, rel(v, tv_sum(E, base.T, c, so).value), 1e-8);
        }
    }
}

void suite_kashaev(Sink& out) {
    auto base = load_complex(out.cfg, "s3_unknot.json");
    SumOptions so;
    so.threads = out.cfg.threads;
    auto charges = charge_solutions(base.T, 2);
    out.exact("two distinct charges", charges.size() == 2 && charges[0].x != charges[1].x ? 0 : 1);
    std::vector<int> ids = base.T.vertex_ids(), rev = ids;
    std::reverse(rev.begin(), rev.end());
    std::vector<std::vector<int>> orders{ids, {ids[2], ids[0], ids[3], ids[1]}};
    if (ids.size() != 4) orders = {ids, rev};
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        SixJEngine E(rd);
        Scalar tv = tv_sum(E, base.T, *base.coloring, so).value;
        for (size_t c = 0; c < charges.size(); ++c)
            for (size_t o = 0; o < orders.size(); ++o)
                for (unsigned sd : {0u, 5u}) {
                    KashaevOptions ko;
                    ko.vertex_order = orders[o];
                    ko.sqrt_seed = sd;
                    ko.sum = so;
                    Scalar k = kashaev_sum(E, base.T, *base.coloring, charges[c], ko).value;
                    out.add("TV = Kashaev" + rtag(r), rel(tv, k),
                            1e-6, "charge " + std::to_string(c) + " order " + std::to_string(o) + " sqrt seed " + std::to_string(sd));
                }
    }
}

void suite_charge(Sink& out) {
    auto files = shipped_complexes(out.cfg.data_dir);
    out.exact("shipped complexes found", files.empty() ? 1 : 0);
    for (const auto& f : files) {
        auto F = parse_triangulation_json(read_file(f));
        const std::string name = std::filesystem::path(f).filename().string();
        for (const auto& c : charge_solutions(F.T, 3)) {
            // recount in integers: every constraint is exact in halves
            long long bad = 0;
            for (const auto& x : c.x) bad += (x[0] + x[1] + x[2] != 1);
            for (int e = 0; e < F.T.n_edges(); ++e) {
                long long s = 0;
                for (const auto& sl : F.T.edge_slots_of(e)) s += c.twice(sl.tet, sl.a, sl.b);
                bad += (s != (F.T.in_Y(e) ? 0 : 2));
            }
            out.exact("charge constraints " + name, bad);
        }
    }
}

void suite_psihat(Sink& out) {
    for (int r : rs_or(out.cfg, {3})) {
        RootData rd(r);
        SixJEngine E(rd);
        for (unsigned sd : {0u, 5u}) {
            PsiHatSpace P = build_psihat(E, {0.137, 0.219, 0.311}, sd);
            for (const auto& c : check_psihat(E, P)) out.add(c.name + rtag(r), c.residual, 1e-8);
        }
    }
}

void suite_bconsistency(Sink& out) {
    std::mt19937_64 rng(out.cfg.seed);
    const int n = samples_or(out.cfg, 4);
    for (int r : rs_or(out.cfg, {3, 5})) {
        RootData rd(r);
        SixJEngine E(rd);
        long long inv_b = std::llround(1.0 / E.b().real());
        out.exact("1/b = r^2" + rtag(r), std::llabs(inv_b - r * r) + (std::abs(E.b().imag()) > 1e-12));
        for (int s = 0; s < n; ++s) {
            double g1 = random_degree(rng), g2 = random_degree(rng);
            if (!is_admissible_degree(rd, g1 + g2, 0.02)) { --s; continue; }
            long long worst = 0;
            for (int d : b_consistency_dims(E, g1, g2)) worst = std::max(worst, std::llabs(d - inv_b));
            out.exact("sum of Hom dimensions = 1/b" + rtag(r), worst);
        }
    }
}

void suite_moves(Sink& out) {
    auto base = load_complex(out.cfg, "s3_unknot.json");
    std::mt19937_64 rng(out.cfg.seed);
    const std::string sig = iso_signature(base.T);
    auto B = bubble(base.T, base.T.Y.front(), &*base.coloring, &rng);
    out.exact("bubble result validates", validate(B.T).ok() ? 0 : 1, validate(B.T).summary());
    out.exact("bubble coloring", color_check(B.T, *B.coloring) && is_admissible(*B.coloring) ? 0 : 1);
    int new_vertex = *std::max_element(B.T.vertex_ids().begin(), B.T.vertex_ids().end());
    auto IB = inverse_bubble(B.T, new_vertex, &*B.coloring);
    out.exact("inverse bubble restores the complex", iso_signature(IB.T) == sig ? 0 : 1);
    long long rejected = 0;
    try {
        pachner23(base.T, 0, 0);
    } catch (const Error& e) {
        rejected = e.kind() == ErrorKind::QuasiRegularity;
    }
    out.exact("2-3 move leaving quasi-regularity is rejected", rejected ? 0 : 1);

    RootData rd(3);
    SixJEngine E(rd);
    SumOptions so;
    so.threads = out.cfg.threads;
    Scalar tv = tv_sum(E, B.T, *B.coloring, so).value;
    const std::string bsig = iso_signature(B.T);
    int done23 = 0, back = 0;
    for (int t = 0; t < B.T.n_tets() && done23 < 2; ++t)
        for (int f = 0; f < 4 && done23 < 2; ++f) {
            MoveResult P;
            try {
                P = pachner23(B.T, t, f, &*B.coloring);
            } catch (const Error&) {
                continue;
            }
            ++done23;
            out.exact("2-3 result validates", validate(P.T).ok() ? 0 : 1);
            if (P.coloring && is_admissible(*P.coloring))
                out.add("TV under 2-3 r=3", rel(tv, tv_sum(E, P.T, *P.coloring, so).value), 1e-6);
            for (int e = 0; e < P.T.n_edges(); ++e) {
                if (P.T.edge_slots_of(e).size() != 3 || P.T.in_Y(e)) continue;
                try {
                    auto Q = pachner32(P.T, e, &*P.coloring);
                    if (iso_signature(Q.T) == bsig) ++back;
                } catch (const Error&) {
                }
            }
        }
    out.exact("2-3 moves applied", done23 == 2 ? 0 : 1);
    out.exact("3-2 undoes 2-3", back >= done23 ? 0 : 1);
    int lunes = 0;
    for (int t = 0; t < B.T.n_tets() && lunes < 2; ++t)
        for (int f2 = 1; f2 < 4 && lunes < 2; ++f2) {
            try {
                auto L = lune(B.T, t, 0, f2, &*B.coloring);
                ++lunes;
                out.exact("lune result validates", validate(L.T).ok() ? 0 : 1);
                if (L.coloring && is_admissible(*L.coloring))
                    out.add("TV under lune r=3", rel(tv, tv_sum(E, L.T, *L.coloring, so).value), 1e-6);
            } catch (const Error&) {
            }
        }
    out.exact("lune moves applied", lunes > 0 ? 0 : 1);
}

const std::vector<std::pair<std::string, std::function<void(Sink&)>>>& registry() {
    static const std::vector<std::pair<std::string, std::function<void(Sink&)>>> reg{
        {"relations", suite_relations}, {"ribbon", suite_ribbon},   {"sprime", suite_sprime},
        {"mdim", suite_mdim},           {"ambi", suite_ambi},       {"sixj", suite_sixj},
        {"tv", suite_tv},               {"psihat", suite_psihat},   {"kashaev", suite_kashaev},
        {"charge", suite_charge},       {"bconsistency", suite_bconsistency}, {"moves", suite_moves},
    };
    return reg;
}

} // namespace

bool SuiteReport::ok() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed(); });
}

const CheckLine* SuiteReport::worst() const {
    const CheckLine* w = nullptr;
    double score = -1;
    for (const auto& l : lines) {
        if (l.timing) continue;
        double s = l.exact ? (l.value == 0 ? 0.0 : 1e300) : l.value / l.threshold;
        if (s > score) score = s, w = &l;
    }
    return w;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [n, f] : registry()) v.push_back(n);
        return v;
    }();
    return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    for (const auto& [n, f] : registry()) {
        if (n != name) continue;
        SuiteReport rep;
        rep.name = name;
        Sink sink{cfg, rep, {}};
        auto t0 = Clock::now();
        f(sink);
        rep.runtime_ms = 1e3 * seconds_since(t0);
        return rep;
    }
    throw Error(ErrorKind::InvalidInput, "unknown suite " + name);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> shipped_complexes(const std::string& dir) {
    std::vector<std::string> out;
    if (!std::filesystem::is_directory(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        auto j = nlohmann::json::parse(read_file(e.path().string()), nullptr, false);
        if (j.is_object() && j.contains("tets")) out.push_back(e.path().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace qtv
