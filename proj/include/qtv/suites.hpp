#pragma once

// Named verification suites.  Each returns residual lines with their
// thresholds; the CLI, the tests and the acceptance runner share them.

#include <cstdint>
#include <string>
#include <vector>

namespace qtv {

struct CheckLine {
    std::string name;
    double value = 0;     // residual, runtime in seconds, or an integer mismatch
    double threshold = 0; // passes when value < threshold (value == 0 for exact checks)
    bool exact = false;
    bool timing = false; // value is a runtime in seconds
    std::string detail;
    bool passed() const { return exact ? value == 0 : value < threshold; }
};

struct SuiteConfig {
    std::vector<int> rs;      // empty: the suite's default list
    uint64_t seed = 1;
    int threads = 1;
    std::string data_dir;     // shipped complexes, needed by tv/kashaev/charge/moves
    double eps_scale = 1;     // multiplies every residual threshold
    int samples = -1;         // overrides the per-suite sample count when >= 0
};

struct SuiteReport {
    std::string name;
    std::vector<CheckLine> lines;
    double runtime_ms = 0;
    bool ok() const;
    // worst non-timing line by value / threshold
    const CheckLine* worst() const;
};

const std::vector<std::string>& suite_names();
// throws InvalidInput for an unknown name
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

// shipped triangulation files (*.json with a "tets" key) in a directory, sorted
std::vector<std::string> shipped_complexes(const std::string& dir);
std::string read_file(const std::string& path);

} // namespace qtv
