#include "reslab/decay.hpp"

#include <algorithm>
#include <cmath>

namespace reslab {

double SpectralDensity::normalization(const QuadratureSpec& spec) const {
    auto f = [&](double x) { return Complex(density(x), 0.0); };
    double total = 0.0;
    double prev = lo;
    std::vector<double> cuts = refine_hints;
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts) {
        if (c <= prev || c > hi) continue;
        total += integrate(f, prev, c, spec).value.real();
        prev = c;
    }
    if (prev < hi) total += integrate(f, prev, hi, spec).value.real();
    for (const auto& pm : point_masses) total += pm.second;
    return total;
}

Complex reduced_propagator(const SpectralDensity& d, double t, const QuadratureSpec& spec) {
    if (t < 0) throw InputError("reduced_propagator: t must be >= 0");
    Complex v = 0.0;
    // panel boundaries at the sharp features so the Filon refinement sees them
    std::vector<double> cuts;
    for (double h : d.refine_hints)
        if (h > d.lo && h < d.hi) cuts.push_back(h);
    cuts.push_back(d.hi);
    std::sort(cuts.begin(), cuts.end());
    double prev = d.lo;
    for (double c : cuts) {
        if (c <= prev) continue;
        v += integrate_oscillatory(d.density, prev, c, t, spec).value;
        prev = c;
    }
    for (const auto& pm : d.point_masses) v += pm.second * std::exp(Complex(0, -pm.first * t));
    return v;
}

SpectralDensity friedrichs_spectral_density(const FriedrichsModel& m, double hi_cut) {
    m.validate();
    SpectralDensity d;
    d.lo = 0.0;
    d.hi = hi_cut;
    const double g2 = m.g * m.g;
    d.density = [m, g2](double lambda) {
        Complex w = friedrichs_w(m, Complex(lambda, 0.0), FriedrichsSheet::upper);
        // (1/pi) Im 1/(w - lambda) with Im w = -pi g^2 v^2
        return g2 * m.v_squared(lambda).real() / std::norm(w - lambda);
    };
    auto pole = friedrichs_pole(m);
    d.refine_hints.push_back(pole.pole.k.real());
    double width = std::max(1e-6, -2.0 * pole.pole.k.imag());
    d.refine_hints.push_back(pole.pole.k.real() - 5 * width);
    d.refine_hints.push_back(pole.pole.k.real() + 5 * width);
    for (double xb : pole.bound_states) {
        // weight 1/(1 - w'(x)) via central difference along the real axis
        double h = 1e-6 * std::max(1.0, std::abs(xb));
        Complex wp = (friedrichs_w(m, Complex(xb + h, 0), FriedrichsSheet::upper) -
                      friedrichs_w(m, Complex(xb - h, 0), FriedrichsSheet::upper)) /
                     (2 * h);
        d.point_masses.emplace_back(xb, (1.0 / (1.0 - wp)).real());
    }
    return d;
}

namespace {

// resolvent diagonal (f, (H - k^2)^{-1} f) of the two-channel resonant state
Complex twochannel_resolvent_diag(const TwoChannelModel& m, Complex k, Complex kappa) {
    const Complex i{0, 1};
    const double c2 = std::norm(m.c);
    Complex num = c2 + (m.a - i * k) * (m.b + i * kappa);
    Complex den = (m.b + i * kappa) * (m.b + i * kappa) * (c2 - (m.a - i * k) * (m.b - i * kappa));
    return num / den;
}

}  // namespace

SpectralDensity twochannel_spectral_density(const TwoChannelModel& m, double hi_cut) {
    m.validate();
    SpectralDensity d;
    d.lo = 0.0;
    d.hi = hi_cut;
    d.density = [m](double lambda) {
        Complex k = std::sqrt(Complex(lambda, 0));  // k >= 0
        Complex kappa = lambda >= m.E ? Complex(std::sqrt(lambda - m.E), 0)
                                      : Complex(0, std::sqrt(m.E - lambda));
        return twochannel_resolvent_diag(m, k, kappa).imag() / kPi;
    };
    // resonance peak near Re e2
    if (m.b < 0 && m.b > -std::sqrt(m.E)) {
        Complex e2 = twochannel_e2_leading(m);
        double width = std::max(1e-9, -2.0 * e2.imag());
        d.refine_hints = {e2.real() - 5 * width, e2.real(), e2.real() + 5 * width};
    }
    d.refine_hints.push_back(m.E);  // threshold kink
    if (m.a < 0) {
        // bound state at e1 ~ -a^2: residue of the resolvent diagonal
        auto poles = twochannel_poles(m);
        for (const auto& p : poles) {
            if (p.cls != TwoChannelPole::bound) continue;
            double e1 = p.energy.real();
            double h = 1e-7 * std::max(1.0, std::abs(e1));
            auto diag = [&](double e) {
                Complex kk = Complex(0, std::sqrt(-e));
                Complex kap = Complex(0, std::sqrt(m.E - e));
                return twochannel_resolvent_diag(m, kk, kap);
            };
            // w = -Res = lim (e1 - e) G(e): extrapolate symmetric values
            Complex west = 0.5 * (h * diag(e1 - h) - h * diag(e1 + h));
            d.point_masses.emplace_back(e1, west.real());
        }
    }
    return d;
}

SpectralDensity breit_wigner_density(double lambda0, double gamma, double halfwidth) {
    SpectralDensity d;
    d.lo = lambda0 - halfwidth;
    d.hi = lambda0 + halfwidth;
    d.density = [lambda0, gamma](double x) {
        return gamma / (2 * kPi) / (sqr(x - lambda0) + 0.25 * gamma * gamma);
    };
    d.refine_hints = {lambda0 - 5 * gamma, lambda0, lambda0 + 5 * gamma};
    return d;
}

Complex twochannel_propagator(const TwoChannelModel& m, double t) {
    m.validate();
    if (!(m.a != 0.0) || !(m.b < 0.0) || !(m.b > -std::sqrt(m.E)))
        throw InputError("twochannel_propagator: requires a != 0 and -sqrt(E) < b < 0");
    if (t < 0) throw InputError("twochannel_propagator: t must be >= 0");
    const double a = m.a, b = m.b, E = m.E;
    const double c2 = std::norm(m.c);
    const Complex i{0, 1};
    const double rE = std::sqrt(E - b * b);
    const double denomE = a * a - b * b + E;

    // pole energies: e1 near -a^2 (first channel), e2 near E - b^2 (resonance)
    Complex e1(-a * a, 0.0), e2 = twochannel_e2_leading(m);
    for (const auto& p : twochannel_poles(m)) {
        if (p.cls == TwoChannelPole::bound || p.cls == TwoChannelPole::antibound) {
            if (std::abs(p.energy + a * a) < 0.5 * a * a + 0.1) e1 = p.energy;
        } else if (p.cls == TwoChannelPole::resonance || p.cls == TwoChannelPole::embedded) {
            if (std::abs(p.energy - (E - b * b)) < 0.5 * E) e2 = p.energy;
        }
    }

    QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    auto tail = [&](double z) {
        Complex z2{z * z, 0};
        return z2 * std::exp(-z2.real() * t) /
               ((z2 + i * a * a) * (z2 - i * (E - b * b)) * (z2 - i * (E - b * b)));
    };
    Complex tail_int = integrate_semi_infinite(tail, 0.0, spec).value;

    const Complex air = a - i * rE;
    Complex bracket = (2.0 * (std::abs(a) - a) * b / sqr(denomE)) * std::exp(-i * e1 * t) +
                      (i * b / (rE * air * air)) * std::exp(-i * e2 * t) +
                      (4.0 * b / kPi) * std::exp(-i * kPi / 4.0) * tail_int;
    return std::exp(-i * e2 * t) - c2 * bracket;
}

DecayLawSamples twochannel_decay_law(const TwoChannelModel& m, const std::vector<double>& times) {
    DecayLawSamples out;
    out.method = "twochannel-residue";
    out.times = times;
    out.values.reserve(times.size());
    out.errors.reserve(times.size());
    const double c2 = std::norm(m.c);
    for (double t : times) {
        if (m.c == Complex(0.0)) {  // eigenstate survives
            out.values.push_back(1.0);
            out.errors.push_back(0.0);
            continue;
        }
        Complex v = twochannel_propagator(m, t);
        out.values.push_back(std::norm(v));
        out.errors.push_back(c2 * c2);  // leading-order formula: O(|c|^2) relative
    }
    return out;
}

std::vector<std::pair<double, double>> smoothed_log_derivative(const DecayLawSamples& samples,
                                                               double window) {
    const auto& t = samples.times;
    const auto& p = samples.values;
    if (t.size() < 3) throw InputError("smoothed_log_derivative: need at least 3 samples");
    double step = t[1] - t[0];
    if (!(window > step))
        throw InputError("smoothed_log_derivative: window must exceed the grid step");
    std::vector<double> deriv(t.size());
    for (size_t j = 1; j + 1 < t.size(); ++j)
        deriv[j] = (std::log(p[j + 1]) - std::log(p[j - 1])) / (t[j + 1] - t[j - 1]);
    deriv[0] = deriv[1];
    deriv.back() = deriv[t.size() - 2];

    std::vector<std::pair<double, double>> out;
    int half = std::max(1, int(std::floor(0.5 * window / step)));
    for (size_t j = half; j + half < t.size(); ++j) {
        double acc = 0.0;
        for (int o = -half; o <= half; ++o) acc += deriv[j + o];
        out.emplace_back(t[j], acc / (2 * half + 1));
    }
    return out;
}

}  // namespace reslab
