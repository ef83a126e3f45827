#include <qtv/diagram.hpp>

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <set>

namespace qtv {

using nlohmann::json;

namespace {

int line_of(const std::string& text, size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + int(std::count(text.begin(), text.begin() + long(byte), '\n'));
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
}

Scalar complex_of(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::Parse, "expected a number or [re, im]");
}

json complex_json(Scalar z) { return json::array({z.real(), z.imag()}); }

struct ColorTable {
    std::map<std::string, Scalar> by_name;

    Obj obj(const json& j) const {
        if (!j.contains("color")) throw Error(ErrorKind::Parse, "strand without color");
        Scalar a;
        const json& c = j["color"];
        if (c.is_string()) {
            auto it = by_name.find(c.get<std::string>());
            if (it == by_name.end()) throw Error(ErrorKind::Parse, "unknown color " + c.get<std::string>());
            a = it->second;
        } else {
            a = complex_of(c);
        }
        std::string dir = j.value("dir", "up");
        if (dir != "up" && dir != "down") throw Error(ErrorKind::Parse, "dir must be up or down");
        return {a, dir == "down"};
    }
};

} // namespace

RibbonDiagram parse_diagram_json(const std::string& text, std::map<std::string, Scalar>* colors) {
    json j = parse_text(text);
    if (!j.is_object()) throw Error(ErrorKind::Parse, "diagram file must hold a JSON object");
    ColorTable ct;
    if (j.contains("colors")) {
        if (!j["colors"].is_object()) throw Error(ErrorKind::Parse, "colors must be an object");
        for (auto& [k, v] : j["colors"].items()) ct.by_name[k] = complex_of(v);
    }
    RibbonDiagram D;
    for (const auto& s : j.value("strands", json::array())) D.bottom.push_back(ct.obj(s));
    if (!j.contains("slices") || !j["slices"].is_array()) throw Error(ErrorKind::Parse, "missing slices array");
    int idx = 0;
    for (const auto& s : j["slices"]) {
        try {
            std::string kind = s.at("kind").get<std::string>();
            int pos = s.at("pos").get<int>();
            if (kind == "xp") D.slices.push_back(Slice::xp(pos));
            else if (kind == "xm") D.slices.push_back(Slice::xm(pos));
            else if (kind == "cup") D.slices.push_back(Slice::cup(pos, ct.obj(s)));
            else if (kind == "cap") D.slices.push_back(Slice::cap(pos));
            else if (kind == "coupon") {
                std::vector<Obj> out;
                for (const auto& o : s.at("out")) out.push_back(ct.obj(o));
                const json& m = s.at("matrix");
                Mat M(Eigen::Index(m.size()), m.empty() ? 0 : Eigen::Index(m[0].size()));
                for (size_t a = 0; a < m.size(); ++a)
                    for (size_t b = 0; b < m[a].size(); ++b) M(Eigen::Index(a), Eigen::Index(b)) = complex_of(m[a][b]);
                D.slices.push_back(Slice::coupon(pos, s.at("n_in").get<int>(), out, M));
            } else {
                throw Error(ErrorKind::Parse, "unknown slice kind " + kind);
            }
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Parse, "slice " + std::to_string(idx) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, "slice " + std::to_string(idx) + ": " + e.what());
        }
        ++idx;
    }
    D.levels(); // well-formedness
    if (colors) *colors = ct.by_name;
    return D;
}

std::string diagram_to_json(const RibbonDiagram& D) {
    auto obj = [](Obj o) { return json{{"color", complex_json(o.a)}, {"dir", o.dual ? "down" : "up"}}; };
    json j;
    j["strands"] = json::array();
    for (auto o : D.bottom) j["strands"].push_back(obj(o));
    j["slices"] = json::array();
    for (const auto& s : D.slices) {
        json js{{"pos", s.pos}};
        switch (s.kind) {
        case Slice::Kind::Xp: js["kind"] = "xp"; break;
        case Slice::Kind::Xm: js["kind"] = "xm"; break;
        case Slice::Kind::Cap: js["kind"] = "cap"; break;
        case Slice::Kind::Cup: {
            js["kind"] = "cup";
            json o = obj(s.cup_left);
            js["color"] = o["color"];
            js["dir"] = o["dir"];
            break;
        }
        case Slice::Kind::Coupon: {
            js["kind"] = "coupon";
            js["n_in"] = s.n_in;
            js["out"] = json::array();
            for (auto o : s.out) js["out"].push_back(obj(o));
            json m = json::array();
            for (Eigen::Index a = 0; a < s.m.rows(); ++a) {
                json row = json::array();
                for (Eigen::Index b = 0; b < s.m.cols(); ++b) row.push_back(complex_json(s.m(a, b)));
                m.push_back(row);
            }
            js["matrix"] = m;
            break;
        }
        }
        j["slices"].push_back(js);
    }
    return j.dump(1);
}

// ---------------------------------------------------------------- PD codes
//
// X[a,b,c,d]: legs counterclockwise starting at the incoming under strand.
// Crossings are placed one at a time on top of the growing tangle; a crossing
// is placeable when its legs already on the boundary form a block that is
// contiguous both on the boundary and in its counterclockwise order.

namespace {

struct PD {
    std::vector<std::array<int, 4>> x;
    std::map<int, std::vector<std::pair<int, int>>> slots; // edge -> (crossing, leg)
    std::map<std::pair<int, int>, bool> incoming;          // (crossing, leg) -> oriented into crossing
    std::map<int, int> component;                          // edge -> component id
};

void orient(PD& pd) {
    const int n = int(pd.x.size());
    // under strand: leg 0 in, leg 2 out; over strand decided by propagation
    std::vector<int> over_dir(n, -1); // 1: leg 3 -> leg 1 (1 outgoing), 0: leg 1 -> leg 3
    std::map<int, int> head_count;
    auto set_over = [&](int c, int d) {
        over_dir[c] = d;
        pd.incoming[{c, 1}] = (d == 0);
        pd.incoming[{c, 3}] = (d == 1);
    };
    for (int c = 0; c < n; ++c) {
        pd.incoming[{c, 0}] = true;
        pd.incoming[{c, 2}] = false;
    }
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& [e, sl] : pd.slots) {
            if (sl.size() != 2) continue;
            for (int s = 0; s < 2; ++s) {
                auto [c, leg] = sl[s];
                auto [c2, leg2] = sl[1 - s];
                bool known = (leg % 2 == 0) || over_dir[c] >= 0;
                bool known2 = (leg2 % 2 == 0) || over_dir[c2] >= 0;
                if (known && !known2) {
                    bool in = pd.incoming[{c, leg}];
                    // the other end must have the opposite role
                    bool in2 = !in;
                    set_over(c2, (leg2 == 1) == in2 ? 0 : 1);
                    progress = true;
                }
            }
        }
    }
    for (int c = 0; c < n; ++c)
        if (over_dir[c] < 0) {
            // components made only of over arcs: follow edge label order
            int b = pd.x[c][1], d = pd.x[c][3];
            set_over(c, (d == b + 1 || (b > d + 1)) ? 0 : 1);
            // propagate again for consistency along the component
            bool again = true;
            while (again) {
                again = false;
                for (auto& [e, sl] : pd.slots) {
                    auto [c1, l1] = sl[0];
                    auto [c2, l2] = sl[1];
                    bool k1 = (l1 % 2 == 0) || over_dir[c1] >= 0;
                    bool k2 = (l2 % 2 == 0) || over_dir[c2] >= 0;
                    if (k1 && !k2) {
                        set_over(c2, (l2 == 1) == !pd.incoming[{c1, l1}] ? 0 : 1);
                        again = true;
                    } else if (k2 && !k1) {
                        set_over(c1, (l1 == 1) == !pd.incoming[{c2, l2}] ? 0 : 1);
                        again = true;
                    }
                }
            }
        }
    for (auto& [e, sl] : pd.slots)
        if (pd.incoming[sl[0]] == pd.incoming[sl[1]])
            throw Error(ErrorKind::Parse, "PD edge " + std::to_string(e) + " has inconsistent orientation");
}

void components(PD& pd) {
    int next = 0;
    for (auto& [e, sl] : pd.slots) {
        if (pd.component.count(e)) continue;
        std::vector<int> todo{e};
        while (!todo.empty()) {
            int f = todo.back();
            todo.pop_back();
            if (pd.component.count(f)) continue;
            pd.component[f] = next;
            for (auto [c, leg] : pd.slots[f]) todo.push_back(pd.x[c][(leg + 2) % 4]);
        }
        ++next;
    }
}

struct Placement {
    std::vector<std::pair<int, int>> order; // (crossing, rotation s)
};

} // namespace

RibbonDiagram parse_pd_json(const std::string& text) {
    json j = parse_text(text);
    PD pd;
    try {
        for (const auto& c : j.at("pd")) {
            if (c.size() != 4) throw Error(ErrorKind::Parse, "PD crossing needs four edges");
            pd.x.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>(), c[3].get<int>()});
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("PD code: ") + e.what());
    }
    if (pd.x.empty()) throw Error(ErrorKind::Parse, "empty PD code");
    for (int c = 0; c < int(pd.x.size()); ++c)
        for (int l = 0; l < 4; ++l) pd.slots[pd.x[c][l]].push_back({c, l});
    for (auto& [e, sl] : pd.slots)
        if (sl.size() != 2) throw Error(ErrorKind::Parse, "PD edge " + std::to_string(e) + " must appear twice");
    orient(pd);
    components(pd);

    std::vector<Scalar> colors;
    for (const auto& c : j.value("colors", json::array())) colors.push_back(complex_of(c));
    int ncomp = 0;
    for (auto& [e, k] : pd.component) ncomp = std::max(ncomp, k + 1);
    if (int(colors.size()) != ncomp)
        throw Error(ErrorKind::Parse, "need one color per component (" + std::to_string(ncomp) + ")");

    const int n = int(pd.x.size());
    auto leg_obj = [&](int c, int leg, bool top) {
        Scalar a = colors[size_t(pd.component[pd.x[c][leg]])];
        bool in = pd.incoming[{c, leg}];
        bool up = top ? !in : in;
        return Obj{a, !up};
    };
    auto over_leg = [](int leg) { return leg % 2 == 1; };

    // boundary entries: (edge, crossing, leg) of placed crossings
    struct End {
        int edge, c, leg;
    };
    std::function<bool(std::vector<End>&, std::vector<bool>&, RibbonDiagram&, int)> place;
    place = [&](std::vector<End>& bd, std::vector<bool>& placed, RibbonDiagram& D, int left) -> bool {
        // close adjacent ends of one edge
        bool capped = true;
        while (capped) {
            capped = false;
            for (size_t p = 0; p + 1 < bd.size(); ++p)
                if (bd[p].edge == bd[p + 1].edge) {
                    D.slices.push_back(Slice::cap(int(p)));
                    bd.erase(bd.begin() + long(p), bd.begin() + long(p) + 2);
                    capped = true;
                    break;
                }
        }
        if (left == 0) return bd.empty();
        for (int c = 0; c < n; ++c) {
            if (placed[c]) continue;
            for (int s = 0; s < 4; ++s) {
                // legs s..s+k-1 must sit on the boundary left to right
                int k = 0;
                while (k < 4) {
                    int leg = (s + k) % 4;
                    int e = pd.x[c][leg];
                    bool on = false;
                    for (auto [cc, ll] : pd.slots[e])
                        if (!(cc == c && ll == leg) && placed[cc]) on = true;
                    if (!on) break;
                    ++k;
                }
                int prev = (s + 3) % 4;
                bool prev_on = false;
                for (auto [cc, ll] : pd.slots[pd.x[c][prev]])
                    if (!(cc == c && ll == prev) && placed[cc]) prev_on = true;
                if (k < 4 && prev_on) continue; // not the start of the block
                if (k == 0 && !bd.empty()) continue;
                // all on-boundary legs of c must be in the block
                int total = 0;
                for (int l = 0; l < 4; ++l)
                    for (auto [cc, ll] : pd.slots[pd.x[c][l]])
                        if (!(cc == c && ll == l) && placed[cc]) ++total;
                if (total != k) continue;
                int start = -1;
                if (k > 0) {
                    for (size_t p = 0; p + size_t(k) <= bd.size(); ++p) {
                        bool ok = true;
                        for (int t = 0; t < k && ok; ++t) {
                            int leg = (s + t) % 4;
                            ok = bd[p + size_t(t)].edge == pd.x[c][leg] &&
                                 !(bd[p + size_t(t)].c == c && bd[p + size_t(t)].leg == leg);
                        }
                        if (ok) {
                            start = int(p);
                            break;
                        }
                    }
                    if (start < 0) continue;
                } else {
                    start = 0;
                }
                RibbonDiagram D2 = D;
                std::vector<End> bd2 = bd;
                auto L = [&](int t) { return (s + t) % 4; };
                const int p = start;
                auto xing = [&](int leg_bottom_left) {
                    return over_leg(leg_bottom_left) ? Slice::xp(0) : Slice::xm(0);
                };
                std::vector<End> top;
                if (k == 0) {
                    // top order l3 l2 l1 l0
                    D2.slices.push_back(Slice::cup(p, leg_obj(c, L(3), true)));
                    D2.slices.push_back(Slice::cup(p + 1, leg_obj(c, L(2), true)));
                    Slice x = xing(L(0));
                    x.pos = p + 2;
                    D2.slices.push_back(x);
                    top = {{pd.x[c][L(3)], c, L(3)}, {pd.x[c][L(2)], c, L(2)}, {pd.x[c][L(1)], c, L(1)},
                           {pd.x[c][L(0)], c, L(0)}};
                } else if (k == 1) {
                    D2.slices.push_back(Slice::cup(p, leg_obj(c, L(3), true)));
                    Slice x = xing(L(1));
                    x.pos = p + 1;
                    D2.slices.push_back(x);
                    top = {{pd.x[c][L(3)], c, L(3)}, {pd.x[c][L(2)], c, L(2)}, {pd.x[c][L(1)], c, L(1)}};
                } else if (k == 2) {
                    Slice x = xing(L(0));
                    x.pos = p;
                    D2.slices.push_back(x);
                    top = {{pd.x[c][L(3)], c, L(3)}, {pd.x[c][L(2)], c, L(2)}};
                } else if (k == 3) {
                    Slice x = xing(L(0));
                    x.pos = p;
                    D2.slices.push_back(x);
                    D2.slices.push_back(Slice::cap(p + 1));
                    top = {{pd.x[c][L(3)], c, L(3)}};
                } else {
                    Slice x = xing(L(1));
                    x.pos = p + 1;
                    D2.slices.push_back(x);
                    D2.slices.push_back(Slice::cap(p));
                    D2.slices.push_back(Slice::cap(p));
                }
                bd2.erase(bd2.begin() + p, bd2.begin() + p + k);
                bd2.insert(bd2.begin() + p, top.begin(), top.end());
                placed[c] = true;
                if (place(bd2, placed, D2, left - 1)) {
                    D = D2;
                    bd = bd2;
                    return true;
                }
                placed[c] = false;
            }
        }
        return false;
    };

    std::vector<End> bd;
    std::vector<bool> placed(size_t(n), false);
    RibbonDiagram D;
    if (!place(bd, placed, D, n))
        throw Error(ErrorKind::Parse, "PD code could not be laid out as a Morse word");
    D.levels();
    return D;
}

} // namespace qtv
