#include <qtv/psihat.hpp>
#include <qtv/statesum.hpp>
#include <qtv/suites.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef QTV_DATA_DIR
#define QTV_DATA_DIR "data"
#endif

using namespace qtv;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, ParseFail = 2, InadmissibleInput = 3, ResidualFail = 4 };

struct RunConfig {
    int r = 3;
    double eps = 1e-9;
    uint64_t seed = 1;
    int threads = 1;
    std::string out;
};

json cjson(Scalar z) { return json::array({z.real(), z.imag()}); }

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + cfg.out);
    f << text;
}

void emit(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

// "x" or "re,im"
Scalar parse_weight(const std::string& s) {
    std::stringstream ss(s);
    double re = 0, im = 0;
    char comma = 0;
    if (!(ss >> re)) throw Error(ErrorKind::Parse, "bad weight '" + s + "'");
    if (ss >> comma) {
        if (comma != ',' || !(ss >> im)) throw Error(ErrorKind::Parse, "bad weight '" + s + "'");
    }
    return {re, im};
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        try {
            v.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "bad integer list '" + s + "'");
        }
    return v;
}

TriangulationFile load_colored(const std::string& path) {
    auto F = parse_triangulation_json(read_file(path));
    if (!F.coloring) throw Error(ErrorKind::Inadmissible, path + " carries no coloring");
    if (!color_check(F.T, *F.coloring)) throw Error(ErrorKind::Inadmissible, "coloring violates a face condition");
    if (!is_admissible(*F.coloring)) throw Error(ErrorKind::Inadmissible, "coloring takes a value in {0, 1/2}");
    auto rep = validate(F.T);
    if (!rep.ok()) throw Error(ErrorKind::Inadmissible, "not an H-triangulation: " + rep.summary());
    return F;
}

// ------------------------------------------------------------------ commands

int cmd_link(const RunConfig& cfg, const std::string& path, int cut_id, bool all_cuts) {
    auto t0 = std::chrono::steady_clock::now();
    RootData rd(cfg.r, cfg.eps);
    std::string text = read_file(path);
    auto probe = json::parse(text, nullptr, false);
    RibbonDiagram D = probe.is_object() && probe.contains("pd") ? parse_pd_json(text) : parse_diagram_json(text);
    if (!D.closed()) throw Error(ErrorKind::InvalidInput, "diagram is not closed");
    auto cuts = admissible_cuts(rd, D);
    if (cuts.empty()) throw Error(ErrorKind::Inadmissible, "no strand with an admissible color");
    if (cut_id < 0 || cut_id >= int(cuts.size()))
        throw Error(ErrorKind::InvalidInput, "cut id out of range (" + std::to_string(cuts.size()) + " cuts)");
    Scalar v = gprime(rd, D, cuts[size_t(cut_id)]);
    json j{{"command", "link"}, {"r", cfg.r}, {"invariant", cjson(v)}, {"cuts", cuts.size()},
           {"cut", {{"level", cuts[size_t(cut_id)].level}, {"pos", cuts[size_t(cut_id)].pos}}}};
    if (all_cuts) {
        double dev = 0;
        for (const auto& c : cuts) dev = std::max(dev, std::abs(gprime(rd, D, c) - v) / std::max(std::abs(v), 1e-300));
        j["residuals"] = {{"cut_independence", dev}};
    }
    j["runtime_ms"] = ms_since(t0);
    emit(cfg, j);
    return Ok;
}

int cmd_sixj(const RunConfig& cfg, const std::vector<std::string>& ws) {
    auto t0 = std::chrono::steady_clock::now();
    RootData rd(cfg.r, cfg.eps);
    SixJEngine E(rd);
    std::array<Scalar, 6> c;
    for (size_t i = 0; i < 6; ++i) {
        c[i] = parse_weight(ws[i]);
        if (!is_typical(rd, c[i])) throw Error(ErrorKind::Inadmissible, "color " + ws[i] + " is not typical");
    }
    MultTensor t = E.sixj_tensor(c[0], c[1], c[2], c[3], c[4], c[5]);
    json factors = json::array();
    for (const auto& f : t.factors) factors.push_back({cjson(f[0]), cjson(f[1]), cjson(f[2])});
    json labels = json::array();
    for (Scalar x : c) labels.push_back(cjson(E.canon(x)));
    emit(cfg, json{{"command", "sixj"}, {"r", cfg.r}, {"labels", labels}, {"invariant", cjson(t.value)},
                   {"factors", factors}, {"runtime_ms", ms_since(t0)}});
    return Ok;
}

int cmd_tv(const RunConfig& cfg, const std::string& path) {
    auto F = load_colored(path);
    RootData rd(cfg.r, cfg.eps);
    SixJEngine E(rd);
    SumOptions so;
    so.threads = cfg.threads;
    auto R = tv_sum(E, F.T, *F.coloring, so);
    emit(cfg, json{{"command", "tv"}, {"r", cfg.r}, {"invariant", cjson(R.value)}, {"states", R.states},
                   {"tets", F.T.n_tets()}, {"runtime_ms", R.runtime_ms}});
    return Ok;
}

int cmd_kashaev(const RunConfig& cfg, const std::string& path, int charge_id, const std::string& order,
                unsigned sqrt_seed) {
    auto F = load_colored(path);
    RootData rd(cfg.r, cfg.eps);
    SixJEngine E(rd);
    auto charges = charge_solutions(F.T, charge_id + 1);
    if (charge_id < 0 || charge_id >= int(charges.size()))
        throw Error(ErrorKind::InvalidInput, "only " + std::to_string(charges.size()) + " charges available");
    const Charge& ch = charges[size_t(charge_id)];
    KashaevOptions ko;
    ko.sum.threads = cfg.threads;
    ko.sqrt_seed = sqrt_seed;
    if (!order.empty()) ko.vertex_order = parse_ints(order);
    auto R = kashaev_sum(E, F.T, *F.coloring, ch, ko);
    json twice = json::array();
    for (const auto& x : ch.x) twice.push_back(x);
    emit(cfg, json{{"command", "kashaev"}, {"r", cfg.r}, {"invariant", cjson(R.value)}, {"states", R.states},
                   {"charge_twice", twice}, {"sqrt_seed", sqrt_seed}, {"runtime_ms", R.runtime_ms}});
    return Ok;
}

int cmd_check(const RunConfig& cfg, bool r_given, const std::string& suite, int samples, const std::string& data) {
    SuiteConfig sc;
    if (r_given) sc.rs = {cfg.r};
    sc.seed = cfg.seed;
    sc.threads = cfg.threads;
    sc.data_dir = data;
    sc.eps_scale = cfg.eps / 1e-9;
    sc.samples = samples;
    std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
    json reports = json::array();
    bool ok = true;
    for (const auto& n : names) {
        SuiteReport rep = run_suite(n, sc);
        json lines = json::array();
        for (const auto& l : rep.lines) {
            json jl{{"name", l.name}, {"value", l.value}, {"threshold", l.threshold}, {"passed", l.passed()}};
            if (l.timing) jl = {{"name", l.name}, {"runtime_s", l.value}, {"limit_s", l.threshold}, {"passed", l.passed()}};
            if (!l.detail.empty()) jl["detail"] = l.detail;
            lines.push_back(jl);
        }
        reports.push_back({{"suite", n}, {"passed", rep.ok()}, {"residuals", lines}, {"runtime_ms", rep.runtime_ms}});
        ok = ok && rep.ok();
    }
    emit(cfg, json{{"command", "check"}, {"seed", cfg.seed}, {"passed", ok}, {"suites", reports}});
    return ok ? Ok : ResidualFail;
}

int cmd_moves(const RunConfig& cfg, const std::string& path, const std::string& move, const std::string& edge,
              int vertex, int tet, int face, int face2) {
    auto F = parse_triangulation_json(read_file(path));
    const GColoring* c = F.coloring ? &*F.coloring : nullptr;
    std::mt19937_64 rng(cfg.seed);
    auto edge_id = [&]() {
        if (edge.empty()) throw Error(ErrorKind::Parse, "--move " + move + " needs --edge");
        auto v = parse_ints(edge);
        if (v.size() == 1) return v[0];
        if (v.size() != 2) throw Error(ErrorKind::Parse, "--edge takes a class index or u,v");
        auto es = F.T.edges_between(v[0], v[1]);
        if (es.size() != 1) throw Error(ErrorKind::InvalidInput, "vertices " + edge + " do not name a unique edge");
        return es[0];
    };
    MoveResult R;
    if (move == "bubble") R = bubble(F.T, edge_id(), c, &rng);
    else if (move == "inverse-bubble") R = inverse_bubble(F.T, vertex, c);
    else if (move == "2-3") R = pachner23(F.T, tet, face, c);
    else if (move == "3-2") R = pachner32(F.T, edge_id(), c);
    else if (move == "lune") R = lune(F.T, tet, face, face2, c);
    else throw Error(ErrorKind::InvalidInput, "unknown move " + move);
    emit(cfg, triangulation_to_json(R.T, R.coloring ? &*R.coloring : nullptr));
    return Ok;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Parse: return ParseFail;
    default: return InadmissibleInput;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum invariants from nilpotent representations of unrolled quantum sl2"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    auto* r_opt = app.add_option("--r", cfg.r, "odd root order r >= 3");
    app.add_option("--eps", cfg.eps, "relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for randomized suites and moves");
    app.add_option("--threads", cfg.threads, "threads for state sums")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out, "write the report here instead of stdout");

    std::string file;
    int cut_id = 0;
    bool all_cuts = false;
    auto* link = app.add_subcommand("link", "G' of a closed colored diagram (Morse word or PD code)");
    link->add_option("file", file)->required();
    link->add_option("--cut", cut_id, "index into the admissible cuts");
    link->add_flag("--all-cuts", all_cuts, "also report the spread over every admissible cut");

    std::vector<std::string> weights;
    auto* sixj = app.add_subcommand("sixj", "modified 6j-symbol of six weights i j k l m n");
    sixj->add_option("weights", weights, "weights as x or re,im")->required()->expected(6);

    auto* tv = app.add_subcommand("tv", "Turaev-Viro state sum of a colored H-triangulation");
    tv->add_option("file", file)->required();

    int charge_id = 0;
    std::string order;
    unsigned sqrt_seed = 0;
    auto* kas = app.add_subcommand("kashaev", "Kashaev state sum with an integral charge");
    kas->add_option("file", file)->required();
    kas->add_option("--charge", charge_id, "which charge solution to use");
    kas->add_option("--order", order, "vertex ids, smallest first, comma separated");
    kas->add_option("--sqrt-seed", sqrt_seed, "sign choice for square roots of d (0 = principal)");

    std::string suite;
    int samples = -1;
    std::string data = QTV_DATA_DIR;
    auto* check = app.add_subcommand("check", "run a verification suite; exit 4 on a failed residual");
    check->add_option("suite", suite, "suite name or all")->required();
    check->add_option("--samples", samples, "override the sample count");
    check->add_option("--data", data, "directory of shipped complexes");

    std::string move, edge;
    int vertex = -1, tet = 0, face = 0, face2 = 1;
    auto* moves = app.add_subcommand("moves", "apply a move to a triangulation and print the result");
    moves->add_option("file", file)->required();
    moves->add_option("--move", move, "bubble, inverse-bubble, 2-3, 3-2 or lune")->required();
    moves->add_option("--edge", edge, "edge class index or u,v");
    moves->add_option("--vertex", vertex, "vertex id (inverse-bubble)");
    moves->add_option("--tet", tet);
    moves->add_option("--face", face);
    moves->add_option("--face2", face2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ParseFail;
    }

    try {
        if (cfg.r < 3 || cfg.r % 2 == 0) throw Error(ErrorKind::InvalidInput, "r must be odd and >= 3");
        if (*link) return cmd_link(cfg, file, cut_id, all_cuts);
        if (*sixj) return cmd_sixj(cfg, weights);
        if (*tv) return cmd_tv(cfg, file);
        if (*kas) return cmd_kashaev(cfg, file, charge_id, order, sqrt_seed);
        if (*check) {
            if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
                throw Error(ErrorKind::InvalidInput, "unknown suite " + suite);
            return cmd_check(cfg, r_opt->count() > 0, suite, samples, data);
        }
        if (*moves) return cmd_moves(cfg, file, move, edge, vertex, tet, face, face2);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InadmissibleInput;
    }
    return Ok;
}
