#pragma once

#include <stdexcept>
#include <string>

namespace qtv {

enum class ErrorKind {
    InvalidInput,
    DegenerateParameter,
    Inadmissible,
    Parse,
    NotScalar,
    Plan,
    Infeasible,
    PatternNotFound,
    QuasiRegularity,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateParameter: return "degenerate-parameter";
    case ErrorKind::Inadmissible: return "inadmissible";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::NotScalar: return "not-scalar";
    case ErrorKind::Plan: return "plan";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::PatternNotFound: return "pattern-not-found";
    case ErrorKind::QuasiRegularity: return "quasi-regularity-violated";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace qtv
