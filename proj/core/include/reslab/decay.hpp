#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "reslab/models.hpp"
#include "reslab/numerics.hpp"

namespace reslab {

/// Spectral measure of the unstable state: an absolutely continuous density on
/// [lo, hi] plus optional point masses (bound states).  `refine_hints` marks
/// sharp features (resonance peaks) that the quadrature must resolve.
struct SpectralDensity {
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::pair<double, double>> point_masses;  // (location, weight)
    std::vector<double> refine_hints;

    /// integral of the density plus the point masses; should be 1 within 1e-6.
    double normalization(const QuadratureSpec& spec = {}) const;
};

/// v(t) = integral e^{-i lambda t} density(lambda) d lambda + sum w_j e^{-i lambda_j t},
/// oscillatory part by Filon quadrature.
Complex reduced_propagator(const SpectralDensity& d, double t, const QuadratureSpec& spec = {});

/// Semigroup (pole) approximation A e^{-i z_p t}.
inline Complex pole_approximation(Complex amplitude, Complex z_p, double t) {
    return amplitude * std::exp(Complex(0, -1) * z_p * t);
}

/// Spectral density of the Friedrichs unstable state on [0, hi_cut].
SpectralDensity friedrichs_spectral_density(const FriedrichsModel& m, double hi_cut);

/// Spectral density of the two-channel resonant state (second-channel
/// eigenstate of the decoupled operator) on [0, hi_cut], including the
/// first-channel bound-state mass when a < 0.
SpectralDensity twochannel_spectral_density(const TwoChannelModel& m, double hi_cut);

/// Breit-Wigner density truncated to [lambda0 - halfwidth, lambda0 + halfwidth].
SpectralDensity breit_wigner_density(double lambda0, double gamma, double halfwidth);

/// Explicit reduced propagator of the two-channel resonant state: two
/// exponential terms plus a semi-infinite tail integral (leading order in c).
Complex twochannel_propagator(const TwoChannelModel& m, double t);

/// Decay law P(t) = |v(t)|^2 from twochannel_propagator.
DecayLawSamples twochannel_decay_law(const TwoChannelModel& m, const std::vector<double>& times);

/// Central-difference d(ln P)/dt convolved with a boxcar of the given width.
/// Returns (t, smoothed derivative) on the interior of the sample grid.
std::vector<std::pair<double, double>> smoothed_log_derivative(const DecayLawSamples& samples,
                                                               double window);

}  // namespace reslab
