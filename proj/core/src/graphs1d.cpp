#include <cmath>

#include "reslab/models.hpp"

namespace reslab {

// ---------------------------------------------------------------------------
// Line with a stub
// ---------------------------------------------------------------------------

void StubModel::validate() const {
    if (!(l > 0)) throw InputError("stub: l must be > 0");
}

Complex StubModel::condition(Complex k) const {
    // 2ik D(k) = b^2 u'(0) + (d - 2ik)(c u' - u)(0), u(x) = sin k(l-x); divided by k.
    // Away from k = 0 the e^{+-ikl} coefficient form is used: the trigonometric
    // grouping cancels catastrophically at depth when an extremal coefficient
    // vanishes (b = +-sqrt(2)).
    Complex kl = k * l;
    if (std::abs(kl) < 1.0)
        return -b * b * std::cos(kl) +
               (d - Complex(0, 2) * k) * (-c * std::cos(kl) - l * sinc(kl));
    const Complex i{0, 1};
    Complex q = d - 2.0 * i * k;
    // b^2 - 2 via the difference of squares: relative accuracy survives near the
    // resonance-free couplings b = +-sqrt(2), where the e^{+ikl} coefficient
    // must vanish exactly rather than leak O(eps) times the huge exponential
    double b2m2 = (b - std::sqrt(2.0)) * (b + std::sqrt(2.0));
    Complex ap = -0.5 * b2m2 - 0.5 * c * q - d / (2.0 * i * k);
    Complex am = -0.5 * b2m2 - 2.0 - 0.5 * c * q + d / (2.0 * i * k);
    return ap * std::exp(i * kl) + am * std::exp(-i * kl);
}

std::vector<Complex> StubModel::free_poles(int n_lo, int n_hi) const {
    if (c != 0.0 || d != 0.0)
        throw InputError("stub free poles: closed form requires c = d = 0");
    std::vector<Complex> out;
    double b2 = b * b;
    if (std::abs(b2 - 2.0) < 1e-14) return out;  // no resonances at all
    for (int n = n_lo; n <= n_hi; ++n) {
        if (b2 < 2.0)
            out.push_back(Complex(n * kPi / l, std::log((2.0 - b2) / (2.0 + b2)) / (2.0 * l)));
        else
            out.push_back(
                Complex((2 * n - 1) * kPi / (2.0 * l), std::log((b2 - 2.0) / (b2 + 2.0)) / (2.0 * l)));
    }
    return out;
}

MetricGraph StubModel::to_graph() const {
    validate();
    // junction vertex: slots (u(0), lead1, lead2); far end of the stub Dirichlet
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3), B = Eigen::MatrixXcd::Zero(3, 3);
    // u(0) - b f(0) - c u'(0) = 0
    A(0, 0) = 1;
    A(0, 1) = -b;
    B(0, 0) = -c;
    // f1(0) - f2(0) = 0
    A(1, 1) = 1;
    A(1, 2) = -1;
    // -d f(0) + b u'(0) + f1'(0) + f2'(0) = 0
    A(2, 1) = -d;
    B(2, 0) = b;
    B(2, 1) = 1;
    B(2, 2) = 1;
    MetricGraph g;
    g.vertices.push_back({"junction", CouplingMatrix::from_boundary_conditions(A, B)});
    g.vertices.push_back({"stub-end", CouplingMatrix::dirichlet(1)});
    g.edges.push_back({0, 1, l, 0.0});
    g.leads.push_back({0, 2});
    return g;
}

// ---------------------------------------------------------------------------
// Lasso graph
// ---------------------------------------------------------------------------

void LassoModel::validate() const {
    if (!(L > 0)) throw InputError("lasso: L must be > 0");
}

// Sign convention of the last term follows the reflection-amplitude denominator
// (1 - ik mu)[alpha - 2k(cos Phi - cos kL)/sin kL] - i omega^2 k, which places the
// resonance zeros in the lower half-plane and matches the graph determinant.
Complex LassoModel::condition(Complex k) const {
    double Phi = 2 * kPi * phi;
    Complex kL = k * L;
    if (std::abs(kL) < 1.0) {
        Complex bracket = 2.0 * (std::cos(Phi) - std::cos(kL)) - alpha * L * sinc(kL);
        return (1.0 - Complex(0, mu) * k) * bracket +
               Complex(0, 1) * omega * omega * k * L * sinc(kL);
    }
    const Complex i{0, 1};
    Complex w = 1.0 - i * mu * k;
    Complex ap = -w * (1.0 + alpha / (2.0 * i * k)) + 0.5 * omega * omega;
    Complex am = -w * (1.0 - alpha / (2.0 * i * k)) - 0.5 * omega * omega;
    return 2.0 * std::cos(Phi) * w + ap * std::exp(i * kL) + am * std::exp(-i * kL);
}

std::vector<double> LassoModel::embedded(int n_max) const {
    std::vector<double> out;
    double frac = phi - std::floor(phi);
    bool integer = std::min(frac, 1.0 - frac) < 1e-12;
    bool half = std::abs(frac - 0.5) < 1e-12;
    if (!integer && !half) return out;
    for (int n = 1; n <= n_max; ++n) {
        if (integer && n % 2 == 0) out.push_back(n * kPi / L);
        if (half && n % 2 == 1) out.push_back(n * kPi / L);
    }
    return out;
}

MetricGraph LassoModel::to_graph() const {
    validate();
    // loop edge v->v plus one lead; slots (u(0), u(L), f)
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3), B = Eigen::MatrixXcd::Zero(3, 3);
    // u(0) - u(L) = 0
    A(0, 0) = 1;
    A(0, 1) = -1;
    // -omega u(0) + f(0) - mu f'(0) = 0
    A(1, 0) = -omega;
    A(1, 2) = 1;
    B(1, 2) = -mu;
    // u'(0) - u'(L) - alpha u(0) + omega f'(0) = 0; outward derivatives p0 = u'(0), p1 = -u'(L)
    A(2, 0) = -alpha;
    B(2, 0) = 1;
    B(2, 1) = 1;
    B(2, 2) = omega;
    MetricGraph g;
    g.vertices.push_back({"junction", CouplingMatrix::from_boundary_conditions(A, B)});
    g.edges.push_back({0, 0, L, 2 * kPi * phi});
    g.leads.push_back({0, 1});
    return g;
}

// ---------------------------------------------------------------------------
// Loop with two leads
// ---------------------------------------------------------------------------

void LoopTwoLeadsModel::validate() const {
    if (!(l > 0)) throw InputError("loop-two-leads: l must be > 0");
    if (variant == Variant::general && (lambda < 0.0 || lambda > 1.0))
        throw InputError("loop-two-leads: lambda must lie in [0,1]");
}

Complex LoopTwoLeadsModel::condition(Complex k) const {
    const Complex i{0, 1};
    switch (variant) {
        case Variant::delta: {
            // -alpha sin kl + 2k(1 + i sin kl - cos kl), divided by k
            if (std::abs(k * l) < 1.0)
                return -alpha * l * sinc(k * l) +
                       2.0 * (1.0 + i * std::sin(k * l) - std::cos(k * l));
            // equivalently 2 - 2 e^{-ikl} - alpha sin(kl)/k, grouped by e^{+-ikl}
            Complex ap = -alpha / (2.0 * i * k);
            Complex am = alpha / (2.0 * i * k) - 2.0;
            return 2.0 + ap * std::exp(i * k * l) + am * std::exp(-i * k * l);
        }
        case Variant::magnetic:
            // e^{-ikl} = cos Phi; the l-independent term vanishes at Phi = pi/2
            return 2.0 * (std::exp(-i * k * l) - std::cos(Phi));
        case Variant::general: {
            Complex num[2], den[2];
            for (int j = 0; j < 2; ++j) {
                den[j] = 1.0 - i * k * inv_alpha_tilde[j];
                num[j] = inv_alpha[j] * den[j] + i * k * gamma[j] * gamma[j];
            }
            // sin kl1 sin kl2 D - 4k^2 N sin^2 kl + k S sin 2kl grouped by the
            // exponentials e^{+-2ikl}, e^{+-2ik l lambda}
            Complex D = den[0] * den[1];
            Complex N = num[0] * num[1];
            Complex S = num[0] * den[1] + num[1] * den[0];
            Complex e2p = std::exp(2.0 * i * k * l), e2m = std::exp(-2.0 * i * k * l);
            Complex eLp = std::exp(2.0 * i * k * l * lambda),
                    eLm = std::exp(-2.0 * i * k * l * lambda);
            Complex a2 = -0.25 * D + k * k * N + k * S / (2.0 * i);
            Complex a2m = -0.25 * D + k * k * N - k * S / (2.0 * i);
            Complex a0 = -2.0 * k * k * N;
            return 0.25 * D * (eLp + eLm) + a2 * e2p + a2m * e2m + a0;
        }
    }
    throw std::logic_error("unreachable");
}

MetricGraph LoopTwoLeadsModel::to_graph() const {
    validate();
    MetricGraph g;
    if (variant == Variant::delta) {
        g.vertices.push_back({"junction", CouplingMatrix::delta(4, alpha)});
        g.edges.push_back({0, 0, l, 0.0});
        g.leads.push_back({0, 2});
        return g;
    }
    if (variant == Variant::magnetic) {
        g.vertices.push_back({"junction", CouplingMatrix::kirchhoff(4)});
        g.edges.push_back({0, 0, l, Phi});
        g.leads.push_back({0, 2});
        return g;
    }
    // general variant: two vertices at opposite points of the loop, one lead each;
    // vertex slots (f1, f2, g); outward edge derivatives p1, p2
    auto coupling = [&](int j) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3), B = Eigen::MatrixXcd::Zero(3, 3);
        // f1 = f2
        A(0, 0) = 1;
        A(0, 1) = -1;
        // f1 - inv_alpha (f1'+f2') - gamma g' = 0   (derivative sum in outward form)
        A(1, 0) = 1;
        B(1, 0) = -inv_alpha[j];
        B(1, 1) = -inv_alpha[j];
        B(1, 2) = -gamma[j];
        // g - gamma (f1'+f2') - inv_alpha_tilde g' = 0
        A(2, 2) = 1;
        B(2, 0) = -gamma[j];
        B(2, 1) = -gamma[j];
        B(2, 2) = -inv_alpha_tilde[j];
        return CouplingMatrix::from_boundary_conditions(A, B);
    };
    g.vertices.push_back({"v1", coupling(0)});
    g.vertices.push_back({"v2", coupling(1)});
    if (lambda < 1.0) {
        g.edges.push_back({0, 1, l * (1.0 - lambda), 0.0});
        g.edges.push_back({0, 1, l * (1.0 + lambda), 0.0});
    } else {
        throw InputError("loop-two-leads: graph form requires lambda < 1");
    }
    g.leads.push_back({0, 1});
    g.leads.push_back({1, 1});
    return g;
}

// ---------------------------------------------------------------------------
// Cross-shaped graph
// ---------------------------------------------------------------------------

void CrossModel::validate() const {
    if (!(l > 0)) throw InputError("cross: l must be > 0");
    if (lambda < 0.0 || lambda > 1.0) throw InputError("cross: lambda must lie in [0,1]");
}

Complex CrossModel::condition(Complex k) const {
    // 2k sin 2kl + (alpha - 2ik)(cos 2kl lambda - cos 2kl), divided by k^2
    Complex kl = k * l;
    if (std::abs(kl) < 1.0)
        return 4.0 * l * sinc(2.0 * kl) +
               2.0 * (alpha - Complex(0, 2) * k) * l * l * (1.0 + lambda) * (1.0 - lambda) *
                   sinc(kl * (1.0 + lambda)) * sinc(kl * (1.0 - lambda));
    const Complex i{0, 1};
    Complex q = (alpha - 2.0 * i * k) / (2.0 * k * k);
    Complex e2p = std::exp(2.0 * i * kl), e2m = std::exp(-2.0 * i * kl);
    Complex eLp = std::exp(2.0 * i * kl * lambda), eLm = std::exp(-2.0 * i * kl * lambda);
    return (1.0 / (i * k) - q) * e2p + (-1.0 / (i * k) - q) * e2m + q * (eLp + eLm);
}

MetricGraph CrossModel::to_graph() const {
    validate();
    if (lambda >= 1.0) throw InputError("cross: graph form requires lambda < 1");
    MetricGraph g;
    g.vertices.push_back({"center", CouplingMatrix::delta(4, alpha)});
    g.vertices.push_back({"end1", CouplingMatrix::dirichlet(1)});
    g.vertices.push_back({"end2", CouplingMatrix::dirichlet(1)});
    g.edges.push_back({0, 1, l * (1.0 - lambda), 0.0});
    g.edges.push_back({0, 2, l * (1.0 + lambda), 0.0});
    g.leads.push_back({0, 2});
    return g;
}

// ---------------------------------------------------------------------------
// Regular polygon with two leads per vertex
// ---------------------------------------------------------------------------

void PolygonModel::validate() const {
    if (n < 3) throw InputError("polygon: n must be >= 3");
    if (!(l > 0)) throw InputError("polygon: l must be > 0");
}

Complex PolygonModel::condition(Complex k) const {
    Complex prod = 1.0;
    for (int j = 0; j < n; ++j) {
        Complex omega = std::exp(Complex(0, 2 * kPi * j / n));
        prod *= -2.0 * (omega * omega + 1.0) + 4.0 * omega * std::exp(Complex(0, -1) * k * l);
    }
    return prod;
}

std::vector<Complex> PolygonModel::floquet_roots(int j, int m_lo, int m_hi) const {
    validate();
    std::vector<Complex> out;
    double theta = 2 * kPi * j / n;
    double c = std::cos(theta);
    if (std::abs(c) < 1e-14) return out;  // omega^2 + 1 = 0: no resonances
    Complex logc = std::log(Complex(c, 0.0));
    for (int m = m_lo; m <= m_hi; ++m)
        out.push_back((Complex(0, 1) * logc + 2.0 * kPi * m) / l);
    return out;
}

double PolygonModel::effective_size() const {
    validate();
    return (n % 4 == 0) ? 0.5 * (n - 2) * l : 0.5 * n * l;
}

MetricGraph PolygonModel::to_graph() const {
    validate();
    MetricGraph g;
    for (int v = 0; v < n; ++v)
        g.vertices.push_back({"v" + std::to_string(v), CouplingMatrix::kirchhoff(4)});
    for (int v = 0; v < n; ++v) g.edges.push_back({v, (v + 1) % n, l, 0.0});
    for (int v = 0; v < n; ++v) g.leads.push_back({v, 2});
    return g;
}

}  // namespace reslab
