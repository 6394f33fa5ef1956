#include <cmath>

#include "reslab/models.hpp"

namespace reslab {

void WinterModel::validate() const {
    if (!(alpha > 0) || !(R > 0)) throw InputError("winter: alpha and R must be > 0");
    if (truncation < 1) throw InputError("winter: truncation must be >= 1");
}

Complex winter_condition(const WinterModel& m, Complex k) {
    const Complex i{0, 1};
    Complex w = 2.0 * i * k * m.R;
    if (std::abs(w) < 1e-4) {
        // (1 - e^w)/k = -2iR (1 + w/2 + w^2/6 + w^3/24)
        return 2.0 + i * m.alpha * (-2.0 * i * m.R) * (1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0);
    }
    return 2.0 + i * m.alpha * (1.0 - std::exp(w)) / k;
}

Complex winter_condition_alt(const WinterModel& m, Complex k) {
    Complex s = std::sin(k * m.R);
    return 2.0 * k * k + 2.0 * m.alpha * m.alpha * s * s + 2.0 * k * m.alpha * std::sin(2.0 * k * m.R);
}

Complex winter_pole_expansion(const WinterModel& m, int n) {
    double k0 = n * kPi / m.R;
    double aR = m.alpha * m.R;
    return Complex(k0 * (1.0 - 1.0 / aR + 1.0 / (aR * aR)), -k0 * k0 / (m.alpha * m.alpha * m.R));
}

std::vector<ComplexRoot> winter_poles(const WinterModel& m, int n_lo, int n_hi) {
    m.validate();
    if (n_lo < 1 || n_hi < n_lo) throw InputError("winter_poles: bad index range");
    if (n_hi > m.truncation) throw InputError("winter_poles: range exceeds truncation");
    const Complex i{0, 1};
    std::vector<ComplexRoot> out;
    out.reserve(n_hi - n_lo + 1);
    for (int n = n_lo; n <= n_hi; ++n) {
        // fixed point of k = n pi/R + Log(1 - 2ik/alpha)/(2iR), then Newton
        Complex k = Complex(n * kPi / m.R, 0.0);
        for (int it = 0; it < 200; ++it) {
            Complex knew =
                n * kPi / m.R + std::log(1.0 - 2.0 * i * k / m.alpha) / (2.0 * i * m.R);
            if (std::abs(knew - k) < 1e-15 * std::abs(knew)) {
                k = knew;
                break;
            }
            k = knew;
        }
        double step = 0.0;
        for (int it = 0; it < 50; ++it) {
            Complex f = 2.0 * k + i * m.alpha * (1.0 - std::exp(2.0 * i * k * m.R));
            Complex fp = 2.0 + 2.0 * m.alpha * m.R * std::exp(2.0 * i * k * m.R);
            Complex d = f / fp;
            k -= d;
            step = std::abs(d);
            if (step < 1e-14 * std::max(1.0, std::abs(k))) break;
        }
        if (!(k.real() > 0) || !(k.imag() < 0))
            throw NumericError("winter_poles: iterate left the fourth quadrant at n = " +
                               std::to_string(n));
        ComplexRoot r;
        r.k = k;
        r.multiplicity = 1;
        r.residual = step;
        r.enclosure = 10 * step + 1e-13;
        out.push_back(r);
    }
    return out;
}

Complex winter_qn_squared(const WinterModel& m, Complex k) {
    Complex s2 = std::sin(2.0 * k * m.R);
    Complex denom = 2.0 * k + m.alpha * m.alpha * m.R * s2 + m.alpha * s2 +
                    2.0 * k * m.alpha * m.R * std::cos(2.0 * k * m.R);
    return Complex(0, -2) * k * k / denom;
}

Complex winter_mode_overlap(const WinterModel& m, Complex k) {
    // C = int_0^R sqrt(3) R^{-3/2} r * sqrt(2) Q sin(kr) dr
    Complex Q = std::sqrt(winter_qn_squared(m, k));
    Complex s = (std::sin(k * m.R) - k * m.R * std::cos(k * m.R)) / (k * k);
    return std::sqrt(6.0) * std::pow(m.R, -1.5) * Q * s;
}

namespace {

// P(t) for one symmetric truncation; modes listed as k_1..k_N, -conj(k_1..k_N).
double winter_p_of_t(const std::vector<Complex>& modes, const std::vector<Complex>& C,
                     const Eigen::MatrixXcd& I, double t) {
    const int n = static_cast<int>(modes.size());
    Eigen::VectorXcd w(n);
    const Complex rot = -std::exp(Complex(0, -kPi / 4)) * std::sqrt(t);
    for (int j = 0; j < n; ++j) w(j) = C[j] * 0.5 * erfcx(rot * modes[j]);
    Complex p = w.dot(I * w);  // w^dag I w
    return p.real();
}

}  // namespace

DecayLawSamples winter_decay_law(const WinterModel& m, const std::vector<double>& times,
                                 double tolerance) {
    m.validate();
    for (double t : times)
        if (t < 0) throw InputError("winter_decay_law: negative time");

    const int N = m.truncation;
    auto pos = winter_poles(m, 1, N);
    std::vector<Complex> modes(2 * N);
    for (int n = 0; n < N; ++n) {
        modes[n] = pos[n].k;
        modes[N + n] = -std::conj(pos[n].k);
    }
    std::vector<Complex> C(2 * N);
    std::vector<Complex> Q(2 * N);
    for (int j = 0; j < 2 * N; ++j) {
        Q[j] = std::sqrt(winter_qn_squared(m, modes[j]));
        C[j] = winter_mode_overlap(m, modes[j]);
    }
    // I_nl = 2 Q_n conj(Q_l) * (R/2) [sinc((k_n - conj k_l) R) - sinc((k_n + conj k_l) R)]
    Eigen::MatrixXcd I(2 * N, 2 * N);
    for (int r = 0; r < 2 * N; ++r)
        for (int c = 0; c < 2 * N; ++c) {
            Complex p = modes[r], q = std::conj(modes[c]);
            I(r, c) = 2.0 * Q[r] * std::conj(Q[c]) * (m.R / 2.0) *
                      (sinc((p - q) * m.R) - sinc((p + q) * m.R));
        }
    // hermitian transpose convention of w.dot: P = sum conj(w_r) I(r,c) w_c needs I^T
    // we instead evaluate sum_l sum_n w_n I(n,l) conj(w_l) = w^H (I^T) w
    Eigen::MatrixXcd It = I.transpose();

    auto p_full = [&](double t) { return winter_p_of_t(modes, C, It, t); };
    // half truncation reuses the first N/2 positive modes and their mirrors
    const int Nh = std::max(1, N / 2);
    std::vector<Complex> modes_h(2 * Nh), C_h(2 * Nh);
    for (int n = 0; n < Nh; ++n) {
        modes_h[n] = modes[n];
        modes_h[Nh + n] = modes[N + n];
        C_h[n] = C[n];
        C_h[Nh + n] = C[N + n];
    }
    Eigen::MatrixXcd Ih(2 * Nh, 2 * Nh);
    auto hidx = [&](int j) { return j < Nh ? j : N + (j - Nh); };
    for (int r = 0; r < 2 * Nh; ++r)
        for (int c = 0; c < 2 * Nh; ++c) Ih(r, c) = I(hidx(r), hidx(c));
    Eigen::MatrixXcd Iht = Ih.transpose();

    DecayLawSamples out;
    out.method = "winter-resonance-expansion";
    out.times = times;
    out.values.resize(times.size());
    out.errors.resize(times.size());
    for (size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        if (t == 0.0) {
            // the residue expansion represents t > 0; at t = 0 the decay law is
            // the squared norm of the (normalised) initial profile
            QuadratureSpec spec;
            auto prof2 = [&](double r) { return Complex(3.0 * std::pow(m.R, -3.0) * r * r, 0); };
            out.values[i] = integrate(prof2, 0.0, m.R, spec).value.real();
            out.errors[i] = 1e-12;
            continue;
        }
        double pN = p_full(t);
        double pH = winter_p_of_t(modes_h, C_h, Iht, t);
        out.values[i] = pN;
        out.errors[i] = std::abs(pN - pH);
        if (out.errors[i] > tolerance) out.truncation_warning = true;
    }
    return out;
}

}  // namespace reslab
