#include <qtv/complex3d.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>

namespace qtv {

using nlohmann::json;

namespace {

int line_of(const std::string& text, size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + int(std::count(text.begin(), text.begin() + long(byte), '\n'));
}

int get_int(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw Error(ErrorKind::Parse, where + ": missing integer field '" + key + "'");
    return j[key].get<int>();
}

// edge class from either [u, v] (unique edge between ids) or {"tet", "edge": [a, b]}
std::pair<int, int> edge_ref(const HTriangulation& T, const json& j, const std::string& where) {
    if (j.is_array() && j.size() == 2) {
        int u = j[0].get<int>(), v = j[1].get<int>();
        auto es = T.edges_between(u, v);
        if (es.empty()) throw Error(ErrorKind::InvalidInput, where + ": no edge between " + std::to_string(u) + " and " + std::to_string(v));
        if (es.size() > 1)
            throw Error(ErrorKind::InvalidInput, where + ": several edges join " + std::to_string(u) + " and " + std::to_string(v) +
                                                     "; use {\"tet\", \"edge\"}");
        return {es[0], T.edge_ends(es[0]).first == u ? 1 : -1};
    }
    if (j.is_object() && j.contains("edge")) {
        int t = get_int(j, "tet", where);
        if (t < 0 || t >= T.n_tets()) throw Error(ErrorKind::InvalidInput, where + ": tetrahedron out of range");
        const auto& e = j["edge"];
        if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::Parse, where + ": edge must be [slot, slot]");
        int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 0 || a > 3 || b < 0 || b > 3 || a == b) throw Error(ErrorKind::InvalidInput, where + ": bad edge slots");
        return T.edge_of(t, a, b);
    }
    throw Error(ErrorKind::Parse, where + ": expected [u, v] or {\"tet\", \"edge\"}");
}

TriangulationFile parse_doc(const json& doc) {
    if (!doc.is_object() || !doc.contains("tets")) throw Error(ErrorKind::Parse, "missing 'tets'");
    std::vector<Tet> tets;
    for (const auto& t : doc["tets"]) {
        if (!t.is_array() || t.size() != 4) throw Error(ErrorKind::Parse, "tetrahedron " + std::to_string(tets.size()) + ": need 4 vertex ids");
        Tet x;
        for (int a = 0; a < 4; ++a) x.v[size_t(a)] = t[size_t(a)].get<int>();
        tets.push_back(x);
    }
    if (doc.contains("signs")) {
        const auto& s = doc["signs"];
        if (!s.is_array() || s.size() != tets.size()) throw Error(ErrorKind::Parse, "'signs' must have one entry per tetrahedron");
        for (size_t t = 0; t < tets.size(); ++t) tets[t].sign = s[t].get<int>();
    }
    std::vector<Gluing> gl;
    std::set<std::pair<int, int>> seen;
    if (doc.contains("gluings"))
        for (size_t k = 0; k < doc["gluings"].size(); ++k) {
            const auto& g = doc["gluings"][k];
            std::string where = "gluing " + std::to_string(k);
            Gluing x;
            x.tet = get_int(g, "tet", where);
            x.face = get_int(g, "face", where);
            x.to_tet = get_int(g, "to_tet", where);
            x.to_face = get_int(g, "to_face", where);
            if (!g.contains("perm") || !g["perm"].is_array() || g["perm"].size() != 4)
                throw Error(ErrorKind::Parse, where + ": 'perm' must list 4 slots");
            for (int a = 0; a < 4; ++a) x.perm[size_t(a)] = g["perm"][size_t(a)].get<int>();
            // accept both directions of a pairing once
            if (seen.count({x.tet, x.face})) {
                if (seen.count({x.to_tet, x.to_face})) continue;
                throw Error(ErrorKind::InvalidInput, where + ": face glued twice");
            }
            seen.insert({x.tet, x.face});
            seen.insert({x.to_tet, x.to_face});
            gl.push_back(x);
        }
    TriangulationFile out{HTriangulation(std::move(tets), std::move(gl)), std::nullopt};
    HTriangulation& T = out.T;
    if (doc.contains("Y")) {
        std::set<int> Y;
        for (const auto& e : doc["Y"]) Y.insert(edge_ref(T, e, "Y").first);
        T.Y.assign(Y.begin(), Y.end());
    }
    if (doc.contains("coloring") && doc.contains("potential"))
        throw Error(ErrorKind::Parse, "give either 'coloring' or 'potential'");
    if (doc.contains("potential")) {
        Gauge f;
        for (const auto& [k, v] : doc["potential"].items()) f[std::stoi(k)] = v.get<double>();
        out.coloring = coloring_from_potential(T, f);
    } else if (doc.contains("coloring")) {
        const auto& c = doc["coloring"];
        std::vector<std::optional<double>> phi(static_cast<size_t>(T.n_edges()));
        auto put = [&](std::pair<int, int> es, double t, const std::string& where) {
            double v = frac(es.second > 0 ? t : -t);
            if (phi[size_t(es.first)] && lattice_dist(*phi[size_t(es.first)] - v, 1.0) > 1e-9)
                throw Error(ErrorKind::InvalidInput, where + ": conflicting values on one edge");
            phi[size_t(es.first)] = v;
        };
        if (c.is_object()) {
            for (const auto& [k, v] : c.items()) {
                auto comma = k.find(',');
                if (comma == std::string::npos) throw Error(ErrorKind::Parse, "coloring key '" + k + "' must be \"u,v\"");
                json uv = json::array({std::stoi(k.substr(0, comma)), std::stoi(k.substr(comma + 1))});
                put(edge_ref(T, uv, "coloring " + k), v.get<double>(), "coloring " + k);
            }
        } else if (c.is_array()) {
            for (const auto& x : c) {
                if (!x.contains("value")) throw Error(ErrorKind::Parse, "coloring entry needs 'value'");
                put(edge_ref(T, x, "coloring"), x["value"].get<double>(), "coloring");
            }
        } else {
            throw Error(ErrorKind::Parse, "'coloring' must be an object or a list");
        }
        GColoring g;
        for (int e = 0; e < T.n_edges(); ++e) {
            if (!phi[size_t(e)]) {
                auto [u, v] = T.edge_ends(e);
                throw Error(ErrorKind::InvalidInput, "coloring misses edge " + std::to_string(u) + "->" + std::to_string(v));
            }
            g.phi.push_back(*phi[size_t(e)]);
        }
        out.coloring = g;
    }
    return out;
}

} // namespace

TriangulationFile parse_triangulation_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    try {
        return parse_doc(doc);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
}

std::string triangulation_to_json(const HTriangulation& T, const GColoring* c) {
    json doc;
    json tets = json::array(), signs = json::array(), gl = json::array();
    for (const auto& t : T.tets()) {
        tets.push_back(t.v);
        signs.push_back(t.sign);
    }
    for (const auto& g : T.gluings())
        gl.push_back({{"tet", g.tet}, {"face", g.face}, {"to_tet", g.to_tet}, {"to_face", g.to_face}, {"perm", g.perm}});
    doc["tets"] = tets;
    doc["signs"] = signs;
    doc["gluings"] = gl;
    auto ref = [&](int e) -> json {
        auto [u, v] = T.edge_ends(e);
        if (T.edges_between(u, v).size() == 1) return json::array({u, v});
        auto s = T.edge_slots_of(e).front();
        return {{"tet", s.tet}, {"edge", {s.a, s.b}}};
    };
    json Y = json::array();
    for (int e : T.Y) Y.push_back(ref(e));
    doc["Y"] = Y;
    if (c) {
        json col = json::array();
        for (int e = 0; e < T.n_edges(); ++e) {
            auto s = T.edge_slots_of(e).front();
            col.push_back({{"tet", s.tet}, {"edge", {s.a, s.b}}, {"value", c->on(T, s.tet, s.a, s.b)}});
        }
        doc["coloring"] = col;
    }
    // one array element per line
    std::string out = "{\n";
    bool first = true;
    for (const char* key : {"tets", "signs", "gluings", "Y", "coloring"}) {
        if (!doc.contains(key)) continue;
        out += first ? "" : ",\n";
        first = false;
        out += "  \"" + std::string(key) + "\": [";
        const json& arr = doc[key];
        if (key == std::string("signs")) {
            out += arr.dump().substr(1);
            continue;
        }
        for (size_t i = 0; i < arr.size(); ++i) out += (i ? ",\n    " : "\n    ") + arr[i].dump();
        out += "\n  ]";
    }
    return out + "\n}\n";
}

} // namespace qtv
