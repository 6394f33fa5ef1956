#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "reslab/common.hpp"

namespace reslab {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Scaled complementary error function erfcx(u) = exp(u^2) erfc(u) for complex u.
/// Regimes by |u|: integral representation for the small/central region,
/// Laplace continued fraction for the mid range (away from the imaginary axis,
/// where the fraction converges to the wrong boundary value), asymptotic series
/// beyond.  Re u < 0 is handled through erfcx(-u) reflection, Im u < 0 through
/// conjugation, so erfcx(conj(u)) == conj(erfcx(u)) holds exactly.
Complex erfcx(Complex u);

/// Roots of c4 k^4 + c3 k^3 + c2 k^2 + c1 k + c0 via the companion matrix.
/// Throws InputError if c4 == 0.
std::array<Complex, 4> quartic_roots(Complex c0, Complex c1, Complex c2, Complex c3, Complex c4);

/// Group nearby points into (center, count) clusters; centers are cluster means.
std::vector<std::pair<Complex, int>> cluster_points(const std::vector<Complex>& pts, double radius);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    enum class Map { algebraic, exponential } map = Map::algebraic;  // for [0,inf)
};

struct QuadratureResult {
    Complex value{0.0, 0.0};
    double error = 0.0;   // estimated absolute error
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Adaptive quadrature of f over [a, inf) after a variable change.
QuadratureResult integrate_semi_infinite(const std::function<Complex(double)>& f, double a,
                                         const QuadratureSpec& spec = {});

/// Cauchy principal value of  integral f(x)/(lambda - x) dx  over [a,b] (b may be
/// +inf), with the singularity at x = lambda inside the interval.  Symmetric
/// excision with Richardson extrapolation in the excision radius.
QuadratureResult principal_value(const std::function<Complex(double)>& f, double lambda,
                                 double a, double b, const QuadratureSpec& spec = {});

/// Same principal value by singularity subtraction; independent scheme used
/// for cross-checks.
QuadratureResult principal_value_subtracted(const std::function<Complex(double)>& f,
                                            double lambda, double a, double b,
                                            const QuadratureSpec& spec = {});

/// Filon-type quadrature of  integral g(x) exp(-i x t) dx  over [a,b]: piecewise
/// quadratic interpolation of g against exactly integrated oscillatory moments.
/// Stable for arbitrarily large |t|.
QuadratureResult integrate_oscillatory(const std::function<double(double)>& g, double a,
                                       double b, double t, const QuadratureSpec& spec = {});

}  // namespace reslab
