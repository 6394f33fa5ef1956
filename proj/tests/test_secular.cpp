#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "reslab/models.hpp"
#include "reslab/rootfind.hpp"
#include "reslab/secular.hpp"

using namespace reslab;

namespace {

MetricGraph dirichlet_segment(double l = 1.0) {
    MetricGraph g;
    g.vertices.push_back({"a", CouplingMatrix::dirichlet(1)});
    g.vertices.push_back({"b", CouplingMatrix::dirichlet(1)});
    g.edges.push_back({0, 1, l, 0.0});
    return g;
}

AnalyticFn secular_fn(const FlowerForm& fl, SecularForm form = SecularForm::determinant) {
    return [fl, form](Complex k) { return secular_value(fl, k, form); };
}

std::vector<Complex> locations(const std::vector<ComplexRoot>& roots) {
    std::vector<Complex> out;
    for (const auto& r : roots) out.push_back(r.k);
    return out;
}

void check_same_zero_sets(const std::vector<Complex>& a, const std::vector<Complex>& b,
                          double tol) {
    REQUIRE(a.size() == b.size());
    for (Complex x : a) {
        double best = 1e9;
        for (Complex y : b) best = std::min(best, std::abs(x - y));
        CHECK(best < tol);
    }
}

}  // namespace

TEST_CASE("Dirichlet segment spectrum") {
    auto fl = build_flower(dirichlet_segment());
    for (int n = 1; n <= 10; ++n) {
        auto v = secular_value(fl, Complex(n * kPi, 0));
        // a zero: the scaled magnitude collapses relative to nearby values
        auto probe = secular_value(fl, Complex(n * kPi + 0.3, 0));
        CHECK(v.log_mag < probe.log_mag - 10);
    }
    auto roots = find_roots(secular_fn(fl), Rect{{0.5, -1.0}, {32.5, 1.0}}, 1e-11);
    REQUIRE(roots.size() == 10);
    for (int n = 1; n <= 10; ++n) CHECK(std::abs(roots[n - 1].k - double(n) * kPi) < 1e-10);
}

TEST_CASE("secular value agrees with the naive determinant oracle") {
    std::mt19937 rng(2024);
    // random 2-edge, 1-lead graph with a random unitary coupling
    MetricGraph g;
    g.vertices.push_back({"v", CouplingMatrix::from_matrix(oracle::random_unitary(rng, 5))});
    g.edges.push_back({0, 0, 0.9, 0.0});
    g.edges.push_back({0, 0, 1.4, 0.0});
    g.leads.push_back({0, 1});
    auto fl = build_flower(g);

    std::uniform_real_distribution<double> ur(0.2, 8.0), ui(-5.0, 5.0);
    for (int t = 0; t < 40; ++t) {
        Complex k(ur(rng), ui(rng));
        Complex naive = oracle::naive_secular(fl, k);
        for (auto form : {SecularForm::determinant, SecularForm::exp_polynomial}) {
            auto v = secular_value(fl, k, form);
            Complex ours = v.value();
            CHECK(std::abs(ours - naive) < 1e-10 * std::abs(naive));
        }
    }
}

TEST_CASE("determinant remains evaluatable far below the axis") {
    // Weyl graph (delta loop, alpha = 1): F ~ senior e^{ikV} at Im k << 0;
    // the log magnitude must follow |Im k| V linearly and the phase stays clean
    LoopTwoLeadsModel m;
    m.variant = LoopTwoLeadsModel::Variant::delta;
    m.alpha = 1.0;
    auto fl = build_flower(m.to_graph());
    double prev = 0;
    for (double y : {-50.0, -100.0, -200.0, -400.0, -800.0}) {
        auto v = secular_value(fl, Complex(5.3, y));
        CHECK(std::abs(v.phase) > 0.999999);
        if (prev != 0) CHECK(v.log_mag - prev > 0.9 * std::abs(y) / 2);
        prev = v.log_mag;
    }
}

TEST_CASE("rese and determinant forms share zero sets") {
    std::vector<FlowerForm> graphs;
    {
        LoopTwoLeadsModel m;
        m.variant = LoopTwoLeadsModel::Variant::delta;
        m.alpha = 1.0;
        graphs.push_back(build_flower(m.to_graph()));
    }
    {
        StubModel s;
        s.b = 1.0;
        graphs.push_back(build_flower(s.to_graph()));
    }
    {
        CrossModel c;
        c.lambda = 0.3;
        graphs.push_back(build_flower(c.to_graph()));
    }
    for (const auto& fl : graphs) {
        Rect region{{0.3, -7.0}, {30.0, 0.5}};
        auto ra = find_roots(secular_fn(fl, SecularForm::determinant), region, 1e-11);
        auto rb = find_roots(secular_fn(fl, SecularForm::exp_polynomial), region, 1e-11);
        check_same_zero_sets(locations(ra), locations(rb), 1e-9);
    }
}

TEST_CASE("extremal coefficients") {
    // graph with no leads: both coefficients are nonvanishing (Weyl)
    auto seg = build_flower(dirichlet_segment());
    for (Complex k : {Complex(0.37, 0), Complex(1.4, 0.2)}) {
        CHECK(std::abs(extremal_coefficient(seg, k, +1)) > 1e-6);
        CHECK(std::abs(extremal_coefficient(seg, k, -1)) > 1e-6);
    }

    // balanced Kirchhoff loop: senior coefficient vanishes identically
    LoopTwoLeadsModel m;
    m.variant = LoopTwoLeadsModel::Variant::delta;
    m.alpha = 0.0;
    auto loop = build_flower(m.to_graph());
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uk(0.2, 3.0);
    for (int t = 0; t < 10; ++t) {
        Complex k(uk(rng), 0.1 * uk(rng));
        CHECK(std::abs(extremal_coefficient(loop, k, +1)) < 1e-10);
        CHECK(std::abs(extremal_coefficient(loop, k, -1)) > 1e-8);
    }

    // line-with-stub at b = sqrt(2), c = d = 0: F collapses to a single
    // exponential, -2k e^{-ikl}: the senior coefficient vanishes identically
    // while the junior one carries the whole function, so the exponential span
    // is degenerate and the effective size is zero with no resonances at all
    StubModel s;
    s.b = std::sqrt(2.0);
    auto stub = build_flower(s.to_graph());
    for (int t = 0; t < 10; ++t) {
        Complex k(uk(rng), 0.1 * uk(rng));
        CHECK(std::abs(extremal_coefficient(stub, k, +1)) < 1e-10);
        CHECK(std::abs(extremal_coefficient(stub, k, -1)) > 1e-3);
    }
    // the single-exponential structure: |F| decays like e^{Im k l} at depth
    auto v1 = secular_value(stub, Complex(3.0, -2.0));
    auto v2 = secular_value(stub, Complex(3.0, -12.0));
    CHECK(std::abs((v1.log_mag - v2.log_mag) - 10.0 * s.l) < 2.0);
}

TEST_CASE("asymptotics classification") {
    LoopTwoLeadsModel kirchhoff;
    kirchhoff.variant = LoopTwoLeadsModel::Variant::delta;
    kirchhoff.alpha = 0.0;
    CHECK(classify_asymptotics(build_flower(kirchhoff.to_graph())).kind ==
          AsymptoticsClass::NonWeyl);

    LoopTwoLeadsModel delta;
    delta.variant = LoopTwoLeadsModel::Variant::delta;
    delta.alpha = 1.0;
    CHECK(classify_asymptotics(build_flower(delta.to_graph())).kind == AsymptoticsClass::Weyl);

    // unbalanced Kirchhoff vertex (p = 1, q = 2)
    MetricGraph unbal;
    unbal.vertices.push_back({"v", CouplingMatrix::kirchhoff(3)});
    unbal.vertices.push_back({"w", CouplingMatrix::dirichlet(1)});
    unbal.edges.push_back({0, 1, 1.0, 0.0});
    unbal.leads.push_back({0, 2});
    CHECK(classify_asymptotics(build_flower(unbal)).kind == AsymptoticsClass::Weyl);

    // anti-Kirchhoff balanced vertex
    MetricGraph anti;
    anti.vertices.push_back({"v", CouplingMatrix::anti_kirchhoff(4)});
    anti.edges.push_back({0, 0, 1.0, 0.0});
    anti.leads.push_back({0, 2});
    auto cls = classify_asymptotics(build_flower(anti));
    CHECK(cls.kind == AsymptoticsClass::NonWeyl);
    CHECK(cls.witness.find("v") != std::string::npos);
}

TEST_CASE("magnetic classification invariance") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uphi(-kPi, kPi);
    PolygonModel poly;
    poly.n = 3;
    MetricGraph g = poly.to_graph();
    for (int trial = 0; trial < 50; ++trial) {
        for (auto& e : g.edges) e.flux = uphi(rng);
        auto fl = build_flower(g);
        auto a = classify_asymptotics(fl);
        auto b = classify_asymptotics(apply_magnetic(fl));
        CHECK(a.kind == b.kind);
        CHECK(a.kind == AsymptoticsClass::NonWeyl);  // all vertices balanced Kirchhoff
    }
}

TEST_CASE("zero-set symmetry about the imaginary axis") {
    LoopTwoLeadsModel m;
    m.variant = LoopTwoLeadsModel::Variant::delta;
    m.alpha = 1.0;
    auto fl = build_flower(m.to_graph());
    auto roots = find_roots(secular_fn(fl), Rect{{-15.0, -5.5}, {15.0, 0.5}}, 1e-11);
    CHECK(roots.size() >= 4);
    for (const auto& r : roots) {
        if (std::abs(r.k.real()) < 1e-6) continue;
        Complex mirror = -std::conj(r.k);
        double best = 1e9;
        for (const auto& s : roots) best = std::min(best, std::abs(s.k - mirror));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("gauge transform shifts the secular value by a constant phase") {
    MetricGraph g;
    g.vertices.push_back({"v", CouplingMatrix::delta(4, 0.8)});
    g.edges.push_back({0, 0, 1.0, 0.77});
    g.leads.push_back({0, 2});
    auto direct = build_flower(g);
    auto gauged = apply_magnetic(direct);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Complex ratio0;
    for (int t = 0; t < 12; ++t) {
        Complex k(u(rng) + 4.0, u(rng));
        auto a = secular_value(direct, k);
        auto b = secular_value(gauged, k);
        CHECK(std::abs(a.log_mag - b.log_mag) < 1e-9 * std::max(1.0, std::abs(a.log_mag)));
        Complex ratio = a.phase / b.phase;
        if (t == 0)
            ratio0 = ratio;
        else
            CHECK(std::abs(ratio - ratio0) < 1e-10);
    }
}
