// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.

#include <qtv/suites.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

using namespace qtv;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::string suite;
    std::vector<int> rs;
};

} // namespace

int main(int argc, char** argv) {
    std::string data = argc > 1 ? argv[1] : QTV_DATA_DIR;
    const std::vector<Criterion> criteria{
        {1, "relation suite, 50 weights per r", "relations", {3, 5, 7}},
        {2, "ribbon suite", "ribbon", {3, 5}},
        {3, "S' oracle and Hopf relation", "sprime", {3, 5}},
        {4, "modified dimension suite", "mdim", {3, 5, 7}},
        {5, "ambidexterity spot-check", "ambi", {3}},
        {6, "6j identities (BE, orthonormality, bubble)", "sixj", {3, 5}},
        {7, "TV bubble and gauge invariance", "tv", {3, 5}},
        {8, "Psi-hat axioms", "psihat", {3, 5}},
        {9, "TV = Kashaev", "kashaev", {3, 5}},
        {10, "charge constraints on shipped complexes", "charge", {}},
        {11, "b-consistency with integer Hom dimensions", "bconsistency", {3, 5}},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        SuiteConfig cfg;
        cfg.rs = c.rs;
        cfg.data_dir = data;
        std::string verdict, info;
        try {
            SuiteReport rep = run_suite(c.suite, cfg);
            verdict = rep.ok() ? "PASS" : "FAIL";
            const CheckLine* w = rep.worst();
            char buf[256] = "";
            if (w)
                std::snprintf(buf, sizeof buf, "%zu checks, worst %s = %.2e (limit %.1e), %.1f s", rep.lines.size(),
                              w->name.c_str(), w->value, w->threshold, rep.runtime_ms / 1e3);
            info = buf;
            if (!rep.ok())
                for (const auto& l : rep.lines)
                    if (!l.passed()) info += "; failed: " + l.name + (l.detail.empty() ? "" : " (" + l.detail + ")");
        } catch (const std::exception& e) {
            verdict = "FAIL";
            info = e.what();
        }
        failed += verdict != "PASS";
        std::printf("[%s] %2d %-44s %s\n", verdict.c_str(), c.id, c.title.c_str(), info.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
