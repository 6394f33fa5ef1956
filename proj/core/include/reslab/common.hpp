#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace reslab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Bad user input (files, parameters, malformed regions). CLI exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to converge or exhausted its budget. CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// (1-k)U4 - (k+1)I was numerically singular while forming the effective coupling.
struct SingularInnerMatrix : NumericError {
    Complex k;
    explicit SingularInnerMatrix(Complex k_)
        : NumericError("effective coupling: inner matrix singular at k = (" +
                       std::to_string(k_.real()) + ", " + std::to_string(k_.imag()) + ")"),
          k(k_) {}
};

/// Complex value v stored as v = phase * exp(log_mag) with |phase| = 1 (or phase = 0
/// for an exact zero).  Keeps secular determinants representable when |Im k| * V is
/// large enough that exp() would overflow.
struct ScaledComplex {
    Complex phase{0.0, 0.0};
    double log_mag = -std::numeric_limits<double>::infinity();

    static ScaledComplex from(Complex v) {
        double a = std::abs(v);
        if (a == 0.0) return {};
        return {v / a, std::log(a)};
    }
    bool is_zero() const { return phase == Complex(0.0, 0.0); }
    /// Value as a plain complex; overflows to inf for large log_mag.
    Complex value() const { return phase * std::exp(log_mag); }
};

inline ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return {a.phase * b.phase, a.log_mag + b.log_mag};
}

/// sin(x)/x, entire in x.
inline Complex sinc(Complex x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

inline double sqr(double x) { return x * x; }

}  // namespace reslab
