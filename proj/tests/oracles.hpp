#pragma once

// Independent oracles used by the tests: deliberately naive implementations
// that do not share code paths with the library.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "reslab/graph.hpp"

namespace oracle {

using reslab::Complex;

// Brute-force trapezoidal evaluation of erfcx(u) = (2/sqrt(pi)) int_0^inf
// exp(-s^2 - 2us) ds (valid for Re(u^2 term) dominated tails; the integrand
// decays like exp(-s^2) for every fixed u).
inline Complex erfcx_trapezoid(Complex u, int n = 1'000'000, double smax = 16.0) {
    const double h = smax / n;
    Complex acc = 0.5 * (std::exp(-0.0 - 2.0 * u * 0.0) +
                         std::exp(-smax * smax - 2.0 * u * smax));
    for (int i = 1; i < n; ++i) {
        double s = i * h;
        acc += std::exp(-s * s - 2.0 * u * s);
    }
    return acc * h * 2.0 / std::sqrt(reslab::kPi);
}

// Unscaled secular determinant det[(U-I)C1(k) + ik(U+I)C2(k)] in plain
// double-complex arithmetic (overflows for large |Im k|; fine for |Im k| <= 5).
inline Complex naive_secular(const reslab::FlowerForm& fl, Complex k) {
    const int N = fl.num_edges();
    const int M = fl.num_leads;
    const int dim = 2 * N + M;
    Eigen::MatrixXcd C1 = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd C2 = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < N; ++j) {
        Complex kl = k * fl.edge_lengths[j];
        Complex ph = std::exp(Complex(0, -fl.fluxes[j]));
        C1(2 * j, 2 * j + 1) = 1.0;
        C1(2 * j + 1, 2 * j) = ph * std::sin(kl);
        C1(2 * j + 1, 2 * j + 1) = ph * std::cos(kl);
        C2(2 * j, 2 * j) = 1.0;
        C2(2 * j + 1, 2 * j) = -ph * std::cos(kl);
        C2(2 * j + 1, 2 * j + 1) = ph * std::sin(kl);
    }
    for (int m = 0; m < M; ++m) {
        C1(2 * N + m, 2 * N + m) = 1.0;
        C2(2 * N + m, 2 * N + m) = Complex(0, 1);
    }
    const int d = dim;
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
    Eigen::MatrixXcd m = (fl.big_U - I) * C1 + Complex(0, 1) * k * (fl.big_U + I) * C2;
    return m.determinant();
}

// Random polynomial with prescribed roots; evaluation by direct product.
struct Poly {
    std::vector<Complex> roots;  // with multiplicity, each repeated
    Complex operator()(Complex z) const {
        Complex v = 1.0;
        for (Complex r : roots) v *= (z - r);
        return v;
    }
};

inline Poly random_poly(std::mt19937& rng, int max_degree = 8, int max_mult = 3) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_int_distribution<int> mult(1, max_mult);
    Poly p;
    while (true) {
        int m = mult(rng);
        Complex r;
        do {
            r = Complex(uni(rng), uni(rng));
        } while (std::abs(r) > 0.95);
        // keep distinct roots separated so clusters are unambiguous
        bool clash = false;
        for (Complex q : p.roots)
            if (std::abs(q - r) < 0.05) clash = true;
        if (clash) continue;
        if (static_cast<int>(p.roots.size()) + m > max_degree) break;
        for (int i = 0; i < m; ++i) p.roots.push_back(r);
        if (static_cast<int>(p.roots.size()) >= max_degree - 1) break;
    }
    if (p.roots.empty()) p.roots.push_back(Complex(uni(rng) * 0.5, uni(rng) * 0.5));
    return p;
}

inline Eigen::MatrixXcd random_unitary(std::mt19937& rng, int n) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    // fix the phase so the factorisation is unique-ish
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

}  // namespace oracle
