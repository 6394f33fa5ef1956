#include "reslab/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace reslab {

namespace {

constexpr double kInvSqrtPi = 0.5641895835477562869480794515607726;

// 24-point Gauss-Legendre nodes/weights on [-1,1] (positive half; symmetric).
constexpr int kGL = 12;
constexpr double kGLx[kGL] = {
    0.0640568928626056260850430826247450, 0.1911188674736163091586398207570696,
    0.3150426796961633743867932913198102, 0.4337935076260451384870842319133497,
    0.5454214713888395356583756172183723, 0.6480936519369755692524957869107476,
    0.7401241915785543642438281030999784, 0.8200019859739029219539498726697452,
    0.8864155270044010342131543419821967, 0.9382745520027327585236490017087214,
    0.9747285559713094981983919930081690, 0.9951872199970213601799974097007368};
constexpr double kGLw[kGL] = {
    0.1279381953467521569740561652246954, 0.1258374563468282961213753825111836,
    0.1216704729278033912044631534762624, 0.1155056680537256013533444839067835,
    0.1074442701159656347825773424466062, 0.0976186521041138882698806644642471,
    0.0861901615319532759171852029837426, 0.0733464814110803057340336152531165,
    0.0592985849154367807463677585001085, 0.0442774388174198061686926627503305,
    0.0285313886289336631813078159518783, 0.0123412297999871995468056670700372};

// erfcx via its Laplace integral, (2/sqrt(pi)) int_0^inf exp(-s^2 - 2us) ds.
// Requires Re u >= 0; used in the central region where series/fraction lose digits.
Complex erfcx_integral(Complex u) {
    // integrand decays like exp(-s^2); [0, 13] is ample for double precision
    Complex sum = 0.0;
    const double panel = 13.0 / 10.0;
    for (int p = 0; p < 10; ++p) {
        double a = p * panel, b = a + panel;
        double c = 0.5 * (a + b), h = 0.5 * (b - a);
        Complex acc = 0.0;
        for (int i = 0; i < kGL; ++i) {
            double s1 = c + h * kGLx[i];
            double s2 = c - h * kGLx[i];
            acc += kGLw[i] * (std::exp(-s1 * s1 - 2.0 * u * s1) + std::exp(-s2 * s2 - 2.0 * u * s2));
        }
        sum += acc * h;
    }
    return 2.0 * kInvSqrtPi * sum;
}

// Laplace continued fraction, top-down with a fixed depth; Re u >= 1 in use.
Complex erfcx_cfrac(Complex u) {
    const int depth = 64;
    Complex t = 0.0;
    for (int m = depth; m >= 1; --m) t = (0.5 * m) / (u + t);
    return kInvSqrtPi / (u + t);
}

// Asymptotic series 1/(u sqrt(pi)) * sum (-1)^m (2m-1)!!/(2u^2)^m, |u| large.
Complex erfcx_asymptotic(Complex u) {
    Complex iu2 = 0.5 / (u * u);
    Complex term = 1.0, sum = 1.0;
    for (int m = 1; m <= 24; ++m) {
        term *= -double(2 * m - 1) * iu2;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return kInvSqrtPi / u * sum;
}

Complex erfcx_upper_right(Complex u) {
    // Re u >= 0, Im u >= 0
    double r = std::abs(u);
    if (r < 4.0 || (r < 7.0 && u.real() < 1.0)) return erfcx_integral(u);
    if (r < 25.0) return erfcx_cfrac(u);
    return erfcx_asymptotic(u);
}

}  // namespace

Complex erfcx(Complex u) {
    if (u.imag() < 0.0) return std::conj(erfcx(std::conj(u)));
    if (u.real() >= 0.0) return erfcx_upper_right(u);
    // reflection: erfcx(u) = 2 exp(u^2) - erfcx(-u); exp may legitimately overflow
    Complex u2 = u * u;
    return 2.0 * std::exp(u2) - std::conj(erfcx_upper_right(-std::conj(u)));
}

std::array<Complex, 4> quartic_roots(Complex c0, Complex c1, Complex c2, Complex c3, Complex c4) {
    if (std::abs(c4) == 0.0) throw InputError("quartic_roots: leading coefficient is zero");
    Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
    comp(0, 3) = -c0 / c4;
    comp(1, 3) = -c1 / c4;
    comp(2, 3) = -c2 / c4;
    comp(3, 3) = -c3 / c4;
    comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp, false);
    std::array<Complex, 4> roots;
    for (int i = 0; i < 4; ++i) roots[i] = es.eigenvalues()(i);
    // one Newton step per root tightens the backward error
    auto p = [&](Complex k) { return (((c4 * k + c3) * k + c2) * k + c1) * k + c0; };
    auto dp = [&](Complex k) { return ((4.0 * c4 * k + 3.0 * c3) * k + 2.0 * c2) * k + c1; };
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            Complex d = dp(r);
            if (std::abs(d) == 0.0) break;
            Complex step = p(r) / d;
            if (!std::isfinite(std::abs(step))) break;
            r -= step;
        }
    }
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

std::vector<std::pair<Complex, int>> cluster_points(const std::vector<Complex>& pts, double radius) {
    std::vector<std::pair<Complex, int>> clusters;
    std::vector<bool> used(pts.size(), false);
    for (size_t i = 0; i < pts.size(); ++i) {
        if (used[i]) continue;
        Complex sum = pts[i];
        int n = 1;
        used[i] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            Complex center = sum / double(n);
            for (size_t j = 0; j < pts.size(); ++j) {
                if (used[j] || std::abs(pts[j] - center) > radius) continue;
                sum += pts[j];
                ++n;
                used[j] = true;
                grew = true;
            }
        }
        clusters.emplace_back(sum / double(n), n);
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                                : a.first.imag() < b.first.imag();
    });
    return clusters;
}

}  // namespace reslab
