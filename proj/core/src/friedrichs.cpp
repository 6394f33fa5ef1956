#include <cmath>

#include "reslab/models.hpp"

namespace reslab {

Complex FriedrichsModel::v_squared(Complex z) const {
    Complex p = 0.0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) p = p * z + *it;
    return p * p * std::exp(-2.0 * sigma * z);
}

void FriedrichsModel::validate() const {
    if (!(lambda0 > 0)) throw InputError("friedrichs: lambda0 must be > 0");
    if (!(sigma > 0)) throw InputError("friedrichs: sigma must be > 0");
    bool nonzero = false;
    for (double c : poly) nonzero |= (c != 0.0);
    if (!nonzero) throw InputError("friedrichs: form-factor polynomial is identically zero");
}

namespace {

// int_0^inf v^2(xi)/(z - xi) dxi for z off the positive half-axis.  The window
// [0, X] around Re z is regularised by subtracting v^2 at the nearest real
// point (closed-form log for the subtracted part), the tail handled by the
// semi-infinite rule.
Complex friedrichs_integral(const FriedrichsModel& m, Complex z) {
    const double X = std::max({2.0 * std::abs(z) + 10.0, 20.0 / m.sigma, 20.0});
    const double c = std::clamp(z.real(), 0.0, X);
    const Complex vc = m.v_squared(c);
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-12;
    auto reg = [&](double xi) {
        Complex num = m.v_squared(xi) - vc;
        Complex den = z - xi;
        if (std::abs(den) < 1e-14) {  // only reachable for z microscopically off the axis
            double h = 1e-7;
            return -(m.v_squared(xi + h) - m.v_squared(xi - h)) / (2 * h);
        }
        return num / den;
    };
    Complex val = integrate(reg, 0.0, X, spec).value;
    val += vc * (std::log(z) - std::log(z - X));
    auto tail = [&](double xi) { return m.v_squared(xi) / (z - xi); };
    val += integrate_semi_infinite(tail, X, spec).value;
    return val;
}

}  // namespace

Complex friedrichs_I(const FriedrichsModel& m, double lambda) {
    auto f = [&](double xi) { return m.v_squared(xi); };
    return principal_value(f, lambda, 0.0, std::numeric_limits<double>::infinity()).value;
}

Complex friedrichs_w(const FriedrichsModel& m, Complex z, FriedrichsSheet sheet) {
    const double g2 = m.g * m.g;
    if (z.imag() == 0.0 && z.real() > 0.0) {
        // limit from above: PV - i pi v^2(lambda)
        Complex w = m.lambda0 + g2 * friedrichs_I(m, z.real()) -
                    Complex(0, kPi) * g2 * m.v_squared(z.real());
        if (sheet == FriedrichsSheet::continued) return w;  // continuous across the cut
        return w;
    }
    Complex w = m.lambda0 + g2 * friedrichs_integral(m, z);
    if (sheet == FriedrichsSheet::continued) {
        if (z.imag() > 0.0)
            throw InputError("friedrichs_w: continued sheet is defined for Im z <= 0");
        w -= Complex(0, 2 * kPi) * g2 * m.v_squared(z);
    }
    return w;
}

FriedrichsPole friedrichs_pole(const FriedrichsModel& m) {
    m.validate();
    FriedrichsPole out;
    const double g2 = m.g * m.g;

    // bound states first: real zeros of w(x) - x on (-50, 0)
    auto wx = [&](double x) { return (friedrichs_w(m, Complex(x, 0), FriedrichsSheet::upper) - x).real(); };
    const int grid = 200;
    double prev_x = -50.0, prev_f = wx(prev_x);
    for (int i = 1; i <= grid; ++i) {
        double x = -50.0 + 50.0 * double(i) / grid * 0.999;  // stay off the threshold
        double fx = wx(x);
        if (prev_f == 0.0 || (prev_f < 0) != (fx < 0)) {
            double lo = prev_x, hi = x;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((wx(mid) < 0) == (wx(lo) < 0))
                    lo = mid;
                else
                    hi = mid;
            }
            out.bound_states.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = fx;
    }

    // resonance pole: Newton on the continued sheet from the golden-rule seed
    Complex vsq0 = m.v_squared(m.lambda0);
    Complex I0 = friedrichs_I(m, m.lambda0);
    out.expansion = m.lambda0 + g2 * I0 - Complex(0, kPi) * g2 * vsq0;
    Complex z = out.expansion;
    auto F = [&](Complex zz) { return friedrichs_w(m, zz, FriedrichsSheet::continued) - zz; };
    double last_step = 0.0;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        double h = 1e-7 * std::max(1.0, std::abs(z));
        Complex f0 = F(z);
        Complex d = (F(z + h) - F(z - h)) / (2 * h);
        Complex step = f0 / d;
        z -= step;
        last_step = std::abs(step);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
            std::abs(z - m.lambda0) > 0.8 * m.lambda0)
            throw NumericError("friedrichs_pole: Newton diverged (coupling too strong); "
                               "last iterate (" + std::to_string(z.real()) + ", " +
                               std::to_string(z.imag()) + ")");
        if (last_step < 1e-13 * std::max(1.0, std::abs(z))) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("friedrichs_pole: Newton did not converge");
    out.pole.k = z;
    out.pole.multiplicity = 1;
    out.pole.residual = last_step;
    out.pole.enclosure = 10 * last_step + 1e-12;

    // amplitudes
    double h = 1e-6 * std::max(1.0, std::abs(z));
    Complex wprime =
        (friedrichs_w(m, z + h, FriedrichsSheet::continued) -
         friedrichs_w(m, z - h, FriedrichsSheet::continued)) /
        (2 * h);
    out.residue_amplitude = 1.0 / (1.0 - wprime);
    Complex Iprime = (friedrichs_integral(m, z + h) - friedrichs_integral(m, z - h)) / (2 * h);
    out.theorem_amplitude = 1.0 / (1.0 - g2 * Iprime);
    return out;
}

Complex friedrichs_smatrix(const FriedrichsModel& m, double lambda) {
    if (!(lambda > 0)) throw InputError("friedrichs_smatrix: lambda must be > 0");
    const double g2 = m.g * m.g;
    if (g2 == 0.0) return 1.0;
    // S = 1 + 2 pi i g^2 v^2 / (w - lambda); with Im w = -pi g^2 v^2 this is the
    // unimodular ratio conj(w - lambda) / (w - lambda), stable at the resonance
    Complex w = friedrichs_w(m, Complex(lambda, 0), FriedrichsSheet::upper);
    Complex den = w - lambda;
    return std::conj(den) / den;
}

}  // namespace reslab
