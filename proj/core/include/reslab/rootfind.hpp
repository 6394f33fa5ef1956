#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "reslab/common.hpp"

namespace reslab {

/// Analytic evaluator in split phase/log-magnitude form.  Evaluators must be
/// pure; the subdivision scheduler may call them from several threads.
using AnalyticFn = std::function<ScaledComplex(Complex)>;

/// Adapt a plain complex-valued evaluator.
AnalyticFn scaled(std::function<Complex(Complex)> f);

struct Rect {
    Complex lo, hi;  // lower-left, upper-right corners
    double width() const { return hi.real() - lo.real(); }
    double height() const { return hi.imag() - lo.imag(); }
    Complex center() const { return 0.5 * (lo + hi); }
    bool contains(Complex z, double slack = 0.0) const {
        return z.real() >= lo.real() - slack && z.real() <= hi.real() + slack &&
               z.imag() >= lo.imag() - slack && z.imag() <= hi.imag() + slack;
    }
};

struct WindingOptions {
    int initial_samples_per_edge = 16;
    double samples_per_unit = 3.0;  // guards against phase aliasing on long edges
    int max_refine_depth = 48;
    int max_dilations = 5;
    long* evaluation_budget = nullptr;  // optional shared budget, decremented
};

/// Total multiplicity of zeros inside the rectangle by the argument principle:
/// the boundary phase is unwrapped adaptively so every increment stays below
/// pi/2.  A zero sitting on the boundary is handled by dilating the rectangle
/// by 1+1e-4 (up to max_dilations, then NumericError).
int winding_count(const AnalyticFn& f, Rect rect, const WindingOptions& opts = {});

/// Winding of the disc |k| < R approximated by an inscribed polygon.  A finite
/// depth clips the contour to |Im k| <= depth: by the logarithmic-strip bound
/// all far zeros hug the real axis, and secular determinants of graphs with a
/// vanishing extremal coefficient are not numerically evaluatable at depths
/// far beyond the strips (the true value falls below the double noise floor).
int disc_winding(const AnalyticFn& f, double radius, const WindingOptions& opts = {},
                 double depth = std::numeric_limits<double>::infinity());

struct ComplexRoot {
    Complex k;
    int multiplicity = 1;
    double residual = 0.0;   // |last Newton step|, or cell width for clusters
    double enclosure = 0.0;  // half-width of the verified enclosure
    bool near_imaginary_axis = false;  // Re k == 0 within tolerance (bound-state zeros)
};

struct FindRootsOptions {
    double tol = 1e-10;
    long max_evaluations = 40'000'000;
    int threads = 0;  // 0: RESLAB_THREADS or hardware_concurrency
};

/// All zeros of f inside the rectangle with multiplicities.  Quadrisection by
/// winding number; simple roots polished by Newton with a central-difference
/// derivative; coincident clusters located by the contour mean and reported
/// with their summed multiplicity.  Output sorted by (Re k, Im k); total
/// multiplicity always equals the winding of the whole rectangle.
std::vector<ComplexRoot> find_roots(const AnalyticFn& f, Rect region,
                                    const FindRootsOptions& opts = {});
inline std::vector<ComplexRoot> find_roots(const AnalyticFn& f, Rect region, double tol) {
    FindRootsOptions o;
    o.tol = tol;
    return find_roots(f, region, o);
}

struct CountingReport {
    std::vector<double> radii;
    std::vector<long> counts;
    double fitted_slope = 0.0;
    double fitted_w = 0.0;  // pi * slope / 2
    double fit_residual = 0.0;
    bool counts_nondecreasing() const;
};

/// Zero-counting function N(R) over the given ascending radii plus the least
/// squares fit N(R) ~ slope * R + const; the effective size is W = pi/2 * slope.
/// Each count uses a depth-clipped disc, growing the clip until two successive
/// depths agree (all zeros confirmed inside the strip).
CountingReport counting_function(const AnalyticFn& f, const std::vector<double>& radii,
                                 const WindingOptions& opts = {}, double initial_depth = 12.0);

/// Newton iteration with central-difference derivative on scaled values.
/// Returns the root when |step| < tol within 40 iterations.
std::optional<Complex> newton_polish(const AnalyticFn& f, Complex seed, double tol,
                                     double* residual = nullptr);

/// Multiplicity-weighted mean of the zeros inside the circle |z-c| = r,
/// (1/(2 pi i w)) times the contour integral of z f'/f dz, computed from the
/// sampled phases and log magnitudes.  Exact for a single (possibly multiple) zero.
Complex contour_zero_mean(const AnalyticFn& f, Complex center, double radius, int winding);

/// Number of worker threads: RESLAB_THREADS env var if set, else hardware.
int worker_threads();

}  // namespace reslab
