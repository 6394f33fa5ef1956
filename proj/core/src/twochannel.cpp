#include <cmath>

#include "reslab/models.hpp"

namespace reslab {

void TwoChannelModel::validate() const {
    if (!(E > 0)) throw InputError("twochannel: threshold E must be > 0");
}

Complex twochannel_kappa(const TwoChannelModel& m, Complex k, KappaBranch branch) {
    Complex kappa = std::sqrt(k * k - m.E);
    if (kappa.imag() < 0.0 || (kappa.imag() == 0.0 && kappa.real() < 0.0)) kappa = -kappa;
    return branch == KappaBranch::physical ? kappa : -kappa;
}

Complex twochannel_condition(const TwoChannelModel& m, Complex k, KappaBranch branch) {
    Complex kappa = twochannel_kappa(m, k, branch);
    return (m.a - Complex(0, 1) * k) * (m.b - Complex(0, 1) * kappa) - std::norm(m.c);
}

std::vector<TwoChannelPole> twochannel_poles(const TwoChannelModel& m) {
    m.validate();
    const double a = m.a, b = m.b, E = m.E;
    const double c2 = std::norm(m.c);
    // [b(a-ik) - |c|^2]^2 + (k^2-E)(a-ik)^2 = 0
    const Complex i{0, 1};
    Complex c0 = sqr(a * b - c2) - E * a * a;
    Complex c1 = -2.0 * i * b * (a * b - c2) + 2.0 * i * E * a;
    Complex c2k = Complex(a * a + E - b * b, 0);
    Complex c3 = -2.0 * i * a;
    Complex c4 = -1.0;
    auto roots = quartic_roots(c0, c1, c2k, c3, c4);

    std::vector<TwoChannelPole> out;
    const double scale = (std::abs(a) + 1.0) * (std::abs(b) + std::sqrt(E) + 1.0) + c2;
    for (Complex k : roots) {
        for (KappaBranch branch : {KappaBranch::physical, KappaBranch::second}) {
            double res = std::abs(twochannel_condition(m, k, branch)) / scale;
            if (res > 1e-8) continue;
            TwoChannelPole p;
            p.k = k;
            p.energy = k * k;
            p.branch = branch;
            p.residual = res;
            p.branch_point_ambiguous = std::abs(k * k - E) < 1e-8 * std::max(1.0, E);
            Complex kappa = twochannel_kappa(m, k, branch);
            const double tol = 1e-9 * (1.0 + std::abs(p.energy));
            if (std::abs(p.energy.imag()) < tol) {
                if (k.imag() > 0 && kappa.imag() > 0)
                    p.cls = TwoChannelPole::bound;
                else if (p.energy.real() > 0 && std::abs(k.imag()) < 1e-9 && kappa.imag() > 0)
                    p.cls = TwoChannelPole::embedded;
                else
                    p.cls = TwoChannelPole::antibound;
            } else {
                p.cls = TwoChannelPole::resonance;
            }
            out.push_back(p);
        }
    }
    return out;
}

Complex twochannel_e2_leading(const TwoChannelModel& m) {
    const double a = m.a, b = m.b, E = m.E;
    if (!(b < 0.0 && b > -std::sqrt(E)))
        throw InputError("twochannel_e2_leading: requires -sqrt(E) < b < 0");
    const double c2 = std::norm(m.c);
    const double denom = a * a - b * b + E;
    return Complex(E - b * b + 2.0 * a * b * c2 / denom,
                   2.0 * b * c2 * std::sqrt(E - b * b) / denom);
}

TwoChannelAmplitudes twochannel_smatrix(const TwoChannelModel& m, double k) {
    if (!(k > 0)) throw InputError("twochannel_smatrix: k must be real > 0");
    Complex kappa = twochannel_kappa(m, Complex(k, 0), KappaBranch::physical);
    const Complex i{0, 1};
    Complex D = (m.a - i * k) * (m.b - i * kappa) - std::norm(m.c);
    TwoChannelAmplitudes amp;
    amp.reflection = ((m.a + i * k) * (m.b - i * kappa) - std::norm(m.c)) / D;
    amp.transmission = 2.0 * i * k * std::conj(m.c) / D;
    return amp;
}

double twochannel_phase_shift(const TwoChannelModel& m, double k) {
    if (!(k > 0) || !(k * k < m.E))
        throw InputError("twochannel_phase_shift: defined below threshold");
    double root = std::sqrt(m.E - k * k);
    return std::atan(k * (m.b + root) / (m.a * (m.b + root) - std::norm(m.c)));
}

}  // namespace reslab
