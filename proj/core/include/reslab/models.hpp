#pragma once

#include <optional>
#include <vector>

#include "reslab/graph.hpp"
#include "reslab/numerics.hpp"
#include "reslab/rootfind.hpp"

namespace reslab {

// ---------------------------------------------------------------------------
// Friedrichs model: C + L^2(0,inf), embedded eigenvalue lambda0 coupled to the
// continuum by the form factor v(z) = p(z) exp(-sigma z).
// ---------------------------------------------------------------------------

struct FriedrichsModel {
    double lambda0 = 1.0;
    double sigma = 1.0;
    std::vector<double> poly = {0.0, 1.0};  // p coefficients, ascending
    double g = 0.1;

    Complex v_squared(Complex z) const;  // entire continuation of |v|^2
    void validate() const;
};

enum class FriedrichsSheet { upper, continued };

/// w(z, g): upper-sheet value lambda0 + g^2 int v^2/(z-xi) dxi, or its
/// continuation across the cut (minus 2 pi i g^2 v(z)^2).  Real z > 0 is
/// evaluated by the principal-value + i pi rule as the limit from above.
Complex friedrichs_w(const FriedrichsModel& m, Complex z, FriedrichsSheet sheet);

/// Principal value I(lambda) = P int v^2(xi)/(lambda-xi) dxi.
Complex friedrichs_I(const FriedrichsModel& m, double lambda);

struct FriedrichsPole {
    ComplexRoot pole;
    Complex expansion;                  // lambda0 + g^2 I(lambda0) - i pi g^2 v(lambda0)^2
    Complex residue_amplitude;          // A = 1/(1 - w'(z_p)), exact residue
    Complex theorem_amplitude;          // A = 1/(1 - g^2 I'(z_p)) as in the pole-approximation bound
    std::vector<double> bound_states;   // real zeros of w(x)-x on (-50, 0), excluded from the pole
};

/// Newton solve of w(z,g) = z on the continued sheet from z = lambda0.
FriedrichsPole friedrichs_pole(const FriedrichsModel& m);

/// On-shell S-matrix S(lambda) = 1 + 2 pi i g^2 v(lambda)^2 r_u(lambda + i0).
Complex friedrichs_smatrix(const FriedrichsModel& m, double lambda);

// ---------------------------------------------------------------------------
// Two-channel contact model
// ---------------------------------------------------------------------------

struct TwoChannelModel {
    double a = -1.0;
    double b = -0.5;
    Complex c = 0.1;
    double E = 1.0;  // channel threshold, > 0
    void validate() const;
};

enum class KappaBranch { physical, second };

/// kappa = sqrt(k^2 - E) on the requested branch (physical: Im kappa >= 0).
Complex twochannel_kappa(const TwoChannelModel& m, Complex k, KappaBranch branch);

/// D(k) = (a - ik)(b - i kappa) - |c|^2 on the requested branch.
Complex twochannel_condition(const TwoChannelModel& m, Complex k, KappaBranch branch);

struct TwoChannelPole {
    Complex k;
    Complex energy;  // k^2
    enum Class { bound, antibound, resonance, embedded } cls = resonance;
    KappaBranch branch = KappaBranch::physical;
    double residual = 0.0;
    bool branch_point_ambiguous = false;  // |k^2 - E| below resolution
};

/// Squares out kappa into a quartic in k, solves it, and filters candidates by
/// per-branch residual.  Weak-coupling expansions of the theorem are exposed
/// separately for tests.
std::vector<TwoChannelPole> twochannel_poles(const TwoChannelModel& m);

/// Leading-order perturbed second-channel pole energy for -sqrt(E) < b < 0:
/// E - b^2 + 2ab|c|^2/(a^2-b^2+E) + i 2b|c|^2 sqrt(E-b^2)/(a^2-b^2+E).
Complex twochannel_e2_leading(const TwoChannelModel& m);

struct TwoChannelAmplitudes {
    Complex reflection;    // A
    Complex transmission;  // B
};
/// On-shell amplitudes at real k > 0; |A| = 1 below threshold,
/// |A|^2 + (kappa/k)|B|^2 = 1 above.
TwoChannelAmplitudes twochannel_smatrix(const TwoChannelModel& m, double k);

/// Phase shift delta_0(k) below threshold (mod pi).
double twochannel_phase_shift(const TwoChannelModel& m, double k);

// ---------------------------------------------------------------------------
// Winter model (spherical delta shell)
// ---------------------------------------------------------------------------

struct WinterModel {
    double alpha = 500.0;
    double R = 1.0;
    int truncation = 200;  // resonance indices n = 1..truncation (plus mirrors)
    void validate() const;
};

/// Resonance condition 2k + i alpha (1 - e^{2ikR}) = 0 divided by k (entire,
/// the k = 0 factor removed).
Complex winter_condition(const WinterModel& m, Complex k);
/// Alternative kernel-denominator form 2k^2 + 2 alpha^2 sin^2 kR + 2 k alpha sin 2kR;
/// shares the fourth-quadrant zeros (cross-check).
Complex winter_condition_alt(const WinterModel& m, Complex k);

/// Fourth-quadrant poles k_n for n in [n_lo, n_hi], increasing Re k.
std::vector<ComplexRoot> winter_poles(const WinterModel& m, int n_lo, int n_hi);
/// Large-alpha expansion k_{n,0}(1 - 1/(alpha R) + (alpha R)^{-2}) - i k_{n,0}^2/(alpha^2 R).
Complex winter_pole_expansion(const WinterModel& m, int n);

struct DecayLawSamples {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> errors;  // per-sample truncation estimate |P_N - P_{N/2}|
    std::string method;
    bool truncation_warning = false;
};

/// Decay law for the built-in initial state phi(r,0) = sqrt(3) R^{-3/2} r via
/// the resonance expansion P(t) = sum C_n conj(C_l) I_nl M(k_n,t) conj(M(k_l,t)).
/// The expansion represents the evolution for t > 0; at t = 0 the norm of the
/// initial profile is used directly.
DecayLawSamples winter_decay_law(const WinterModel& m, const std::vector<double>& times,
                                 double tolerance = 1e-4);

/// Overlap C_n of the built-in profile with the resonance mode at k (closed form).
Complex winter_mode_overlap(const WinterModel& m, Complex k);
/// Mode normalisation Q_n^2 = -2ik^2 / d'(k).
Complex winter_qn_squared(const WinterModel& m, Complex k);

// ---------------------------------------------------------------------------
// Closed-form graph models (oracles for the generic pipeline)
// ---------------------------------------------------------------------------

struct StubModel {
    double l = 1.0;
    double b = 1.0, c = 0.0, d = 0.0;
    void validate() const;
    /// Entire resonance condition (k = 0 zero removed):
    /// -b^2 cos kl + (d - 2ik)(-c cos kl - l sinc(kl)).
    Complex condition(Complex k) const;
    /// Closed-form resonance family for c = d = 0; empty at |b| = sqrt(2).
    std::vector<Complex> free_poles(int n_lo, int n_hi) const;
    MetricGraph to_graph() const;
};

struct LassoModel {
    double L = 2 * kPi;
    double alpha = 1.0, mu = 0.0, omega = 1.0;
    double phi = 0.0;  // flux in units of 2 pi
    void validate() const;
    /// Entire condition (cleared by sin kL and divided by k):
    /// (1 - i mu k)[2(cos Phi - cos kL) - alpha L sinc(kL)] - i omega^2 k L sinc(kL).
    Complex condition(Complex k) const;
    /// Embedded eigenvalues k_n = n pi / L: even n at integer phi, odd n at
    /// half-integer phi, none otherwise.
    std::vector<double> embedded(int n_max) const;
    MetricGraph to_graph() const;
};

struct LoopTwoLeadsModel {
    enum class Variant { general, delta, magnetic } variant = Variant::delta;
    double l = 1.0;
    // general variant: leads at opposite endpoints, lengths l(1 -+ lambda)
    double lambda = 0.0;
    double inv_alpha[2] = {1.0, 0.0};
    double inv_alpha_tilde[2] = {-2.0, 1.0};
    double gamma[2] = {1.0, 1.0};
    // delta variant: both leads at one vertex with delta strength alpha
    double alpha = 1.0;
    // magnetic variant: Kirchhoff vertex, flux Phi through the loop
    double Phi = 0.0;
    void validate() const;
    Complex condition(Complex k) const;
    MetricGraph to_graph() const;  // delta, magnetic and general variants
};

struct CrossModel {
    double l = 1.0;
    double lambda = 0.3;  // in [0,1]
    double alpha = 1.0;
    void validate() const;
    /// Entire condition (double k = 0 zero removed):
    /// 4 l sinc(2kl) + 2 (alpha - 2ik) l^2 (1-lambda^2) sinc(kl(1+lambda)) sinc(kl(1-lambda)).
    Complex condition(Complex k) const;
    MetricGraph to_graph() const;  // requires lambda < 1
};

struct PolygonModel {
    int n = 5;
    double l = 1.0;
    void validate() const;
    /// Product over Floquet factors omega^n = 1 of -2(omega^2+1) + 4 omega e^{-ikl}.
    Complex condition(Complex k) const;
    /// Explicit roots of one Floquet component, k = (i Log cos(theta) - 2 pi m)/l-style.
    std::vector<Complex> floquet_roots(int j, int m_lo, int m_hi) const;
    /// W_n = n l / 2, or (n-2) l / 2 when 4 | n.
    double effective_size() const;
    MetricGraph to_graph() const;
};

}  // namespace reslab
