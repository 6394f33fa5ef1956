#include "reslab/secular.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace reslab {

namespace {

// sin(z)*exp(-|Im z|) and cos(z)*exp(-|Im z|), computed without overflow.
Complex scaled_sin(Complex z) {
    double x = z.real(), y = z.imag();
    double e2 = std::exp(-2.0 * std::abs(y));
    double ch = 0.5 * (1.0 + e2);             // cosh(y) e^{-|y|}
    double sh = (y >= 0 ? 0.5 : -0.5) * (1.0 - e2);  // sinh(y) e^{-|y|}
    return {std::sin(x) * ch, std::cos(x) * sh};
}
Complex scaled_cos(Complex z) {
    double x = z.real(), y = z.imag();
    double e2 = std::exp(-2.0 * std::abs(y));
    double ch = 0.5 * (1.0 + e2);
    double sh = (y >= 0 ? 0.5 : -0.5) * (1.0 - e2);
    return {std::cos(x) * ch, -std::sin(x) * sh};
}
// exp(+-iz)*exp(-|Im z|)
Complex scaled_exp_plus(Complex z) {
    double y = z.imag();
    double m = std::exp(-y - std::abs(y));
    return m * Complex(std::cos(z.real()), std::sin(z.real()));
}
Complex scaled_exp_minus(Complex z) {
    double y = z.imag();
    double m = std::exp(y - std::abs(y));
    return m * Complex(std::cos(z.real()), -std::sin(z.real()));
}

// Determinant by in-place LU with partial pivoting; rows pre-scaled to unit
// max-norm with the scale folded into the log magnitude.
ScaledComplex scaled_determinant(Eigen::MatrixXcd& m, double log_correction) {
    const int n = static_cast<int>(m.rows());
    double log_mag = log_correction;
    Complex phase = 1.0;
    for (int r = 0; r < n; ++r) {
        double s = m.row(r).cwiseAbs().maxCoeff();
        if (s == 0.0) return {};  // an all-zero row: determinant identically 0
        m.row(r) /= s;
        log_mag += std::log(s);
    }
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(m(c, c));
        for (int r = c + 1; r < n; ++r) {
            double a = std::abs(m(r, c));
            if (a > best) {
                best = a;
                piv = r;
            }
        }
        if (best == 0.0) return {};
        if (piv != c) {
            m.row(piv).swap(m.row(c));
            phase = -phase;
        }
        Complex d = m(c, c);
        log_mag += std::log(std::abs(d));
        phase *= d / std::abs(d);
        for (int r = c + 1; r < n; ++r) {
            Complex f = m(r, c) / d;
            if (f != Complex(0, 0)) m.row(r).tail(n - c - 1) -= f * m.row(c).tail(n - c - 1);
        }
    }
    return {phase, log_mag};
}

// The raw pair of per-edge columns (coefficients of a_j and b_j) degenerates for
// large |Im k|: both are dominated by the same e^{+-ikl} direction, and the
// determinant lives O(e^{-2|Im k| l}) below the entry scale.  Adding +-i times
// one column to the other cancels the dominant exponential exactly (the
// determinant is invariant), so each edge keeps one O(1) bounded column and one
// rescaled column, and no precision is lost at any depth.
ScaledComplex secular_determinant_form(const FlowerForm& fl, Complex k) {
    const int N = fl.num_edges();
    const int M = fl.num_leads;
    const int dim = 2 * N + M;
    const Eigen::MatrixXcd& U = fl.big_U;
    Eigen::MatrixXcd A = U - Eigen::MatrixXcd::Identity(dim, dim);   // U - I
    Eigen::MatrixXcd B = U + Eigen::MatrixXcd::Identity(dim, dim);   // U + I
    const Complex ik = Complex(0, 1) * k;
    const double y = k.imag();

    Eigen::MatrixXcd m(dim, dim);
    double log_correction = 0.0;
    for (int j = 0; j < N; ++j) {
        const double l = fl.edge_lengths[j];
        const Complex kl = k * l;
        const double s = std::abs(y) * l;
        log_correction += s;  // one rescaled column per edge
        const Complex ph = std::exp(Complex(0, -fl.fluxes[j]));  // gauge factor at x=l
        const Complex sn = ph * scaled_sin(kl);  // sin(kl) e^{-s}, flux applied
        const Complex cs = ph * scaled_cos(kl);
        const double tiny = std::exp(-s);
        const int r0 = 2 * j, r1 = 2 * j + 1;
        if (y < 0.0) {
            // col_a + i col_b = i [ e^{-ikl} (A1 - k B1) + (A0 + k B0) ]
            const Complex em = ph * std::exp(Complex(0, -1) * kl);  // |em| = e^{-s}
            m.col(r0) = Complex(0, 1) *
                        (em * (A.col(r1) - k * B.col(r1)) + A.col(r0) + k * B.col(r0));
        } else {
            // col_a - i col_b = -i [ e^{+ikl} (A1 + k B1) + (A0 - k B0) ]
            const Complex epl = ph * std::exp(Complex(0, 1) * kl);  // |epl| = e^{-s}
            m.col(r0) = Complex(0, -1) *
                        (epl * (A.col(r1) + k * B.col(r1)) + A.col(r0) - k * B.col(r0));
        }
        // col_b scaled by e^{-s}
        m.col(r1) = tiny * A.col(r0) + cs * A.col(r1) + ik * sn * B.col(r1);
    }
    for (int c = 2 * N; c < dim; ++c) m.col(c) = A.col(c) - k * B.col(c);
    return scaled_determinant(m, log_correction);
}

ScaledComplex secular_rese_form(const FlowerForm& fl_in, Complex k) {
    // the exponential-polynomial assembly is written for zero flux; gauge first
    const bool magnetic =
        std::any_of(fl_in.fluxes.begin(), fl_in.fluxes.end(), [](double f) { return f != 0.0; });
    const FlowerForm fl = magnetic ? apply_magnetic(fl_in) : fl_in;

    const int N = fl.num_edges();
    const int M = fl.num_leads;
    const int dim = 2 * N + M;
    const Eigen::MatrixXcd& U = fl.big_U;
    Eigen::MatrixXcd Umi = U - Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd Upl = U + Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd Apl = 0.5 * (Umi + k * Upl);  // coefficient of E1
    Eigen::MatrixXcd Ami = 0.5 * (Umi - k * Upl);  // coefficient of E2
    const Complex i{0, 1};

    Eigen::MatrixXcd m(dim, dim);
    double log_correction = 0.0;
    for (int j = 0; j < N; ++j) {
        const double l = fl.edge_lengths[j];
        const Complex kl = k * l;
        const double s = std::abs(k.imag()) * l;
        log_correction += s;
        const Complex ep = scaled_exp_plus(kl);
        const Complex em = scaled_exp_minus(kl);
        const double tiny = std::exp(-s);
        const int r0 = 2 * j, r1 = 2 * j + 1;
        // cancel the dominant exponential exactly, as in the determinant form
        if (k.imag() < 0.0) {
            const Complex em_true = std::exp(Complex(0, -1) * kl);
            m.col(r0) = 2.0 * i * em_true * Ami.col(r1) + i * k * Upl.col(r0) + i * Umi.col(r0);
        } else {
            const Complex ep_true = std::exp(Complex(0, 1) * kl);
            m.col(r0) = -2.0 * i * ep_true * Apl.col(r1) + i * k * Upl.col(r0) - i * Umi.col(r0);
        }
        m.col(r1) = ep * Apl.col(r1) + em * Ami.col(r1) + tiny * Umi.col(r0);
    }
    for (int c = 2 * N; c < dim; ++c) m.col(c) = Umi.col(c) - k * Upl.col(c);
    return scaled_determinant(m, log_correction);
}

}  // namespace

ScaledComplex secular_value(const FlowerForm& flower, Complex k, SecularForm form) {
    return form == SecularForm::determinant ? secular_determinant_form(flower, k)
                                            : secular_rese_form(flower, k);
}

Complex extremal_coefficient(const FlowerForm& flower, Complex k, int sign) {
    const int N = flower.num_edges();
    const Eigen::MatrixXcd Ueff = effective_coupling(flower, k);
    const int n2 = 2 * N;
    Eigen::MatrixXcd m = (Ueff - Eigen::MatrixXcd::Identity(n2, n2)) +
                         double(sign) * k * (Ueff + Eigen::MatrixXcd::Identity(n2, n2));
    return std::pow(Complex(0, 0.5), N) * m.determinant();
}

namespace {

// U = aJ + bI detection for permutation-symmetric couplings
bool as_perm_symmetric(const Eigen::MatrixXcd& U, Complex& a, Complex& b) {
    const int d = static_cast<int>(U.rows());
    if (d == 1) {  // trivially symmetric, never balanced
        a = 0.0;
        b = U(0, 0);
        return true;
    }
    a = U(0, 1);
    b = U(0, 0) - a;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Complex want = (i == j) ? a + b : a;
            if (std::abs(U(i, j) - want) > 1e-10) return false;
        }
    return true;
}

}  // namespace

AsymptoticsClass classify_asymptotics(const FlowerForm& flower) {
    static const std::vector<Complex> samples = {
        {0.23, 0}, {0.57, 0}, {0.91, 0},  {1.37, 0},  {1.83, 0},  {2.31, 0},
        {2.77, 0}, {0, 0.29}, {0, 0.67},  {0, 1.13},  {0, 1.57},  {0, 1.91}};
    const double tol = 1e-8;

    AsymptoticsClass numeric;
    for (int v = 0; v < static_cast<int>(flower.vertex_slots.size()); ++v) {
        if (flower.vertex_slots[v].lead_slots.empty() ||
            flower.vertex_slots[v].internal_slots.empty())
            continue;
        for (int branch = 0; branch < 2; ++branch) {
            bool all = true;
            for (const Complex& k : samples) {
                Complex target = branch == 0 ? (1.0 - k) / (1.0 + k) : (1.0 + k) / (1.0 - k);
                Eigen::MatrixXcd Uv;
                try {
                    Uv = effective_vertex_coupling(flower, v, k);
                } catch (const SingularInnerMatrix&) {
                    all = false;
                    break;
                }
                Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Uv, false);
                double dist = (es.eigenvalues().array() - target).abs().minCoeff();
                if (dist > tol) {
                    all = false;
                    break;
                }
            }
            if (all) {
                numeric.kind = AsymptoticsClass::NonWeyl;
                numeric.witness = "vertex '" + flower.vertex_slots[v].id + "', eigenvalue " +
                                  (branch == 0 ? "(1-k)/(1+k)" : "(1+k)/(1-k)");
                break;
            }
        }
        if (numeric.kind == AsymptoticsClass::NonWeyl) break;
    }

    // Structural criterion for permutation-symmetric couplings: non-Weyl iff a
    // balanced vertex carries Kirchhoff (U = J/p - I) or anti-Kirchhoff
    // (U = -J/p + I).  Where applicable it must agree with the sampling test.
    bool all_symmetric = true;
    bool structural_nonweyl = false;
    std::string structural_witness;
    for (const auto& fv : flower.vertex_slots) {
        const int p = static_cast<int>(fv.internal_slots.size());
        const int q = static_cast<int>(fv.lead_slots.size());
        const int d = p + q;
        std::vector<int> slots = fv.internal_slots;
        slots.insert(slots.end(), fv.lead_slots.begin(), fv.lead_slots.end());
        Eigen::MatrixXcd Uv(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) Uv(i, j) = flower.big_U(slots[i], slots[j]);
        Complex a, b;
        if (!as_perm_symmetric(Uv, a, b)) {
            all_symmetric = false;
            continue;
        }
        if (p != q || p == 0) continue;
        bool kirchhoff = std::abs(a - 1.0 / double(p)) < 1e-10 && std::abs(b + 1.0) < 1e-10;
        bool anti = std::abs(a + 1.0 / double(p)) < 1e-10 && std::abs(b - 1.0) < 1e-10;
        if (kirchhoff || anti) {
            structural_nonweyl = true;
            structural_witness = "balanced vertex '" + fv.id + "' with " +
                                 (kirchhoff ? "Kirchhoff" : "anti-Kirchhoff") + " coupling";
        }
    }
    if (all_symmetric) {
        if (structural_nonweyl != (numeric.kind == AsymptoticsClass::NonWeyl))
            throw NumericError(
                "classify_asymptotics: numeric sampling and structural test disagree "
                "(borderline coupling or bug); numeric witness: " +
                (numeric.witness.empty() ? std::string("none") : numeric.witness));
        if (structural_nonweyl && numeric.witness.empty()) numeric.witness = structural_witness;
    }
    return numeric;
}

}  // namespace reslab
