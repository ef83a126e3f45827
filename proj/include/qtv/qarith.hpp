#pragma once

// Scalar arithmetic at q = exp(2 pi i / r) and the tolerance policy.

#include <qtv/error.hpp>

#include <cmath>
#include <complex>
#include <numbers>

namespace qtv {

using Scalar = std::complex<double>;

struct RootData {
    int r = 3;
    Scalar q;
    double eps_rel = 1e-9;
    double eps_abs = 1e-12;

    explicit RootData(int r_ = 3, double eps_rel_ = 1e-9, double eps_abs_ = 1e-12)
        : r(r_), eps_rel(eps_rel_), eps_abs(eps_abs_) {
        if (r < 3 || r % 2 == 0)
            throw Error(ErrorKind::InvalidInput, "r must be odd and >= 3");
        if (!(eps_rel > 0) || !(eps_abs > 0))
            throw Error(ErrorKind::InvalidInput, "tolerances must be positive");
        q = std::polar(1.0, 2 * std::numbers::pi / r);
    }
};

inline bool finite(Scalar x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

inline Scalar q_pow(const RootData& rd, Scalar x) {
    if (!finite(x)) throw Error(ErrorKind::InvalidInput, "non-finite exponent");
    // reduce the real part mod r so that large exponents keep full precision
    double re = std::fmod(x.real(), double(rd.r));
    Scalar e = Scalar(0, 2 * std::numbers::pi / rd.r) * Scalar(re, x.imag());
    return std::exp(e);
}

inline Scalar q_pow(const RootData& rd, double x) { return q_pow(rd, Scalar(x, 0)); }

// {x} = q^x - q^-x
inline Scalar qbracket(const RootData& rd, Scalar x) { return q_pow(rd, x) - q_pow(rd, -x); }

// [x] = {x}/{1}
inline Scalar qnum(const RootData& rd, Scalar x) { return qbracket(rd, x) / qbracket(rd, 1.0); }

inline Scalar qfact(const RootData& rd, int k) {
    if (k < 0) throw Error(ErrorKind::InvalidInput, "negative factorial argument");
    if (k >= rd.r) throw Error(ErrorKind::DegenerateParameter, "[k]! vanishes for k >= r");
    Scalar f = 1;
    for (int j = 1; j <= k; ++j) f *= qnum(rd, double(j));
    return f;
}

// [k]! / [l]!
inline Scalar qbinom(const RootData& rd, int k, int l) {
    if (l < 0 || l > k) throw Error(ErrorKind::InvalidInput, "qbinom needs 0 <= l <= k");
    return qfact(rd, k) / qfact(rd, l);
}

// [j; p]! = prod_{i=1}^{j} (1 - p^i) / (1 - p)
inline Scalar qfact_alt(int j, Scalar p) {
    Scalar f = 1, pi = 1;
    for (int i = 1; i <= j; ++i) {
        pi *= p;
        f *= (1.0 - pi) / (1.0 - p);
    }
    return f;
}

inline bool approx_eq(const RootData& rd, Scalar a, Scalar b) {
    return std::abs(a - b) <= rd.eps_abs + rd.eps_rel * std::max(std::abs(a), std::abs(b));
}

// distance of a real number to the lattice step*Z
inline double lattice_dist(double x, double step) {
    double t = x / step;
    return std::abs(t - std::round(t)) * step;
}

inline double frac(double x) {
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace qtv
