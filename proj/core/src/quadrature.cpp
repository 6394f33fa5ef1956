#include <algorithm>
#include <cmath>
#include <queue>

#include "reslab/numerics.hpp"

namespace reslab {

namespace {

// QUADPACK (G7,K15) nodes and weights.
constexpr double kXgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897, 0.8648644233597690727897128,
    0.7415311855993944398638648, 0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007, 0.1047900103222501838398763,
    0.1406532597155259187451896, 0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double kWg[4] = {0.1294849661688696932706114, 0.2797053914892766679014678,
                           0.3818300505051189449503698, 0.4179591836734693877551020};

struct PanelEstimate {
    Complex kronrod;
    double error;
};

PanelEstimate gk15(const std::function<Complex(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex fc = f(c);
    Complex resg = fc * kWg[3];
    Complex resk = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        Complex f1 = f(c - h * kXgk[i]);
        Complex f2 = f(c + h * kXgk[i]);
        resk += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
    }
    double err = std::abs(resk - resg) * std::abs(h);
    return {resk * h, err};
}

struct Interval {
    double a, b, error;
    Complex value;
    bool operator<(const Interval& o) const { return error < o.error; }
};

QuadratureResult adaptive(const std::function<Complex(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    QuadratureResult res;
    std::priority_queue<Interval> q;
    auto e0 = gk15(f, a, b);
    res.evaluations = 15;
    q.push({a, b, e0.error, e0.kronrod});
    Complex total = e0.kronrod;
    double toterr = e0.error;
    int splits = 0;
    while (splits < spec.max_subdivisions) {
        if (toterr <= spec.abs_tol || toterr <= spec.rel_tol * std::abs(total)) break;
        Interval worst = q.top();
        q.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {  // interval exhausted at double precision
            q.push({worst.a, worst.b, 0.0, worst.value});
            continue;
        }
        auto l = gk15(f, worst.a, mid);
        auto r = gk15(f, mid, worst.b);
        res.evaluations += 30;
        total += l.kronrod + r.kronrod - worst.value;
        toterr += l.error + r.error - worst.error;
        q.push({worst.a, mid, l.error, l.kronrod});
        q.push({mid, worst.b, r.error, r.kronrod});
        ++splits;
    }
    if (splits >= spec.max_subdivisions &&
        toterr > 100 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
        throw NumericError("adaptive quadrature: subdivision budget exhausted (err " +
                           std::to_string(toterr) + ")");
    res.value = total;
    res.error = toterr;
    return res;
}

}  // namespace

QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
    if (!(b > a)) throw InputError("integrate: need b > a");
    return adaptive(f, a, b, spec);
}

QuadratureResult integrate_semi_infinite(const std::function<Complex(double)>& f, double a,
                                         const QuadratureSpec& spec) {
    std::function<Complex(double)> g;
    if (spec.map == QuadratureSpec::Map::algebraic) {
        // x = a + t/(1-t), dx = dt/(1-t)^2
        g = [f, a](double t) {
            double om = 1.0 - t;
            return f(a + t / om) / (om * om);
        };
    } else {
        // x = a - ln(1-t), dx = dt/(1-t)
        g = [f, a](double t) {
            double om = 1.0 - t;
            return f(a - std::log(om)) / om;
        };
    }
    return adaptive(g, 0.0, 1.0, spec);
}

QuadratureResult principal_value(const std::function<Complex(double)>& f, double lambda,
                                 double a, double b, const QuadratureSpec& spec) {
    const bool semi = std::isinf(b);
    double upper_gap = semi ? 1.0 + lambda - a : b - lambda;
    if (!(lambda > a) || !(upper_gap > 0.0))
        throw InputError("principal_value: singularity must lie inside the interval");

    auto g = [&](double x) { return f(x) / (lambda - x); };
    QuadratureSpec inner = spec;
    inner.abs_tol = spec.abs_tol * 0.1;

    auto excised = [&](double eps) {
        Complex v = adaptive(g, a, lambda - eps, inner).value;
        if (semi) {
            v += adaptive(g, lambda + eps, lambda + 10.0 * (1.0 + std::abs(lambda)), inner).value;
            v += integrate_semi_infinite(g, lambda + 10.0 * (1.0 + std::abs(lambda)), inner).value;
        } else {
            v += adaptive(g, lambda + eps, b, inner).value;
        }
        return v;
    };

    // I(eps) = I + c1 eps + c3 eps^3 + c5 eps^5 + ...: Richardson in odd powers
    const double eps0 = 0.2 * std::min(lambda - a, semi ? 1.0 : b - lambda);
    const int levels = 5;
    Complex tab[levels][levels];
    for (int i = 0; i < levels; ++i) tab[i][0] = excised(eps0 / double(1 << i));
    for (int j = 1; j < levels; ++j) {
        double w = std::pow(2.0, 2 * j - 1);  // kills eps^{2j-1}
        for (int i = j; i < levels; ++i)
            tab[i][j] = (w * tab[i][j - 1] - tab[i - 1][j - 1]) / (w - 1.0);
    }
    QuadratureResult res;
    res.value = tab[levels - 1][levels - 1];
    res.error =
        std::abs(tab[levels - 1][levels - 1] - tab[levels - 1][levels - 2]) + spec.abs_tol;
    return res;
}

QuadratureResult principal_value_subtracted(const std::function<Complex(double)>& f,
                                            double lambda, double a, double b,
                                            const QuadratureSpec& spec) {
    const bool semi = std::isinf(b);
    if (!(lambda > a) || (!semi && !(b > lambda)))
        throw InputError("principal_value: singularity must lie inside the interval");
    const double w = semi ? (lambda - a) : std::min(lambda - a, b - lambda);
    const double lo = lambda - w, hi = lambda + w;
    const Complex flam = f(lambda);
    const double h = 1e-6 * (1.0 + std::abs(lambda));
    const Complex dlam = (f(lambda + h) - f(lambda - h)) / (2.0 * h);

    auto reg = [&](double x) {
        if (std::abs(x - lambda) < 8.0 * h) return -dlam;
        return (f(x) - flam) / (lambda - x);
    };
    QuadratureResult res = integrate(reg, lo, hi, spec);
    // symmetric window: the PV of the subtracted constant vanishes
    if (lo > a) {
        auto g = [&](double x) { return f(x) / (lambda - x); };
        auto left = integrate(g, a, lo, spec);
        res.value += left.value;
        res.error += left.error;
    }
    if (semi) {
        auto g = [&](double x) { return f(x) / (lambda - x); };
        auto tail = integrate_semi_infinite(g, hi, spec);
        res.value += tail.value;
        res.error += tail.error;
    } else if (hi < b) {
        auto g = [&](double x) { return f(x) / (lambda - x); };
        auto right = integrate(g, hi, b, spec);
        res.value += right.value;
        res.error += right.error;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Filon-type oscillatory quadrature
// ---------------------------------------------------------------------------

namespace {

// moments of 1, xi, xi^2 against exp(-i theta xi) over [-1, 1]
void filon_moments(double theta, Complex& m0, Complex& m1, Complex& m2) {
    if (std::abs(theta) < 0.1) {
        double t2 = theta * theta;
        double t4 = t2 * t2;
        m0 = 2.0 * (1.0 - t2 / 6.0 + t4 / 120.0);
        m1 = Complex(0, 2.0) * (-theta / 3.0 + theta * t2 / 30.0 - theta * t4 / 840.0);
        m2 = 2.0 * (1.0 / 3.0 - t2 / 10.0 + t4 / 168.0);
        return;
    }
    double s = std::sin(theta), c = std::cos(theta);
    m0 = 2.0 * s / theta;
    m1 = Complex(0, 2.0) * (theta * c - s) / (theta * theta);
    m2 = 2.0 * ((theta * theta - 2.0) * s + 2.0 * theta * c) / (theta * theta * theta);
}

Complex filon_panel(double x0, double x2, double t, double g0, double g1, double g2) {
    double h = 0.5 * (x2 - x0);
    double x1 = 0.5 * (x0 + x2);
    double qa = 0.5 * (g0 + g2) - g1;
    double qb = 0.5 * (g2 - g0);
    double qc = g1;
    Complex m0, m1, m2;
    filon_moments(h * t, m0, m1, m2);
    return h * std::exp(Complex(0, -x1 * t)) * (qa * m2 + qb * m1 + qc * m0);
}

struct FilonInterval {
    double a, b, error;
    Complex value;
    bool operator<(const FilonInterval& o) const { return error < o.error; }
};

}  // namespace

QuadratureResult integrate_oscillatory(const std::function<double(double)>& g, double a,
                                       double b, double t, const QuadratureSpec& spec) {
    if (!(b > a)) throw InputError("integrate_oscillatory: need b > a");
    QuadratureResult res;

    auto eval_panel = [&](double x0, double x2) {
        double x1 = 0.5 * (x0 + x2);
        double g0 = g(x0), g1 = g(x1), g2 = g(x2);
        Complex whole = filon_panel(x0, x2, t, g0, g1, g2);
        double xl = 0.5 * (x0 + x1), xr = 0.5 * (x1 + x2);
        Complex fine = filon_panel(x0, x1, t, g0, g(xl), g1) +
                       filon_panel(x1, x2, t, g1, g(xr), g2);
        res.evaluations += 5;
        return FilonInterval{x0, x2, std::abs(whole - fine), fine};
    };

    std::priority_queue<FilonInterval> q;
    const int n0 = 16;
    Complex total = 0.0;
    double toterr = 0.0;
    for (int i = 0; i < n0; ++i) {
        double x0 = a + (b - a) * i / n0;
        double x2 = a + (b - a) * (i + 1) / n0;
        auto p = eval_panel(x0, x2);
        total += p.value;
        toterr += p.error;
        q.push(p);
    }
    int splits = 0;
    while (splits < spec.max_subdivisions) {
        if (toterr <= spec.abs_tol || toterr <= spec.rel_tol * std::abs(total)) break;
        FilonInterval worst = q.top();
        q.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            q.push({worst.a, worst.b, 0.0, worst.value});
            continue;
        }
        auto l = eval_panel(worst.a, mid);
        auto r = eval_panel(mid, worst.b);
        total += l.value + r.value - worst.value;
        toterr += l.error + r.error - worst.error;
        q.push(l);
        q.push(r);
        ++splits;
    }
    if (splits >= spec.max_subdivisions &&
        toterr > 100 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
        throw NumericError("oscillatory quadrature: subdivision budget exhausted");
    res.value = total;
    res.error = toterr;
    return res;
}

}  // namespace reslab
