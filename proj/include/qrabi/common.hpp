#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qrabi {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Primitive cube root of unity omega = e^{2*pi*i/3} and the rotation angle 2*pi/3.
inline constexpr double theta3 = 2.0 * pi / 3.0;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input (parameters, config, guards) as opposed to internal or
// runtime failure; the CLI maps this to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw Error(msg); }

[[noreturn]] inline void fail_valid(const std::string& msg) { throw ValidationError(msg); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
}

inline void require_valid(bool cond, const std::string& msg) {
    if (!cond) fail_valid(msg);
}

// omega^k for any integer k, from an exact three-entry table (no trig drift,
// so order-3 identities hold to the last bit).
inline cplx omega_pow(long long k) {
    static const double s = std::sqrt(3.0) / 2.0;
    static const cplx table[3] = {cplx(1.0, 0.0), cplx(-0.5, s), cplx(-0.5, -s)};
    long long r = k % 3;
    if (r < 0) r += 3;
    return table[r];
}

inline cplx omega3() { return omega_pow(1); }

// 12-significant-digit formatting used for every CSV/report number.
// NaN/Inf are treated as computation failures, never serialized.
inline std::string format_g12(double x) {
    if (!std::isfinite(x)) fail("non-finite value in output");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace qrabi
