#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "reslab/graph.hpp"
#include "reslab/io.hpp"

using namespace reslab;

TEST_CASE("delta coupling constructors") {
    auto k2 = CouplingMatrix::delta(2, 0.0);
    CHECK(std::abs(k2.U(0, 0)) < 1e-15);
    CHECK(std::abs(k2.U(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(k2.U(1, 0) - 1.0) < 1e-15);

    auto k4 = CouplingMatrix::delta(4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(k4.U(i, j) - (0.5 - (i == j ? 1.0 : 0.0))) < 1e-15);

    auto d3 = CouplingMatrix::delta(3, 1.0);
    CHECK(std::abs(d3.U(0, 0) - (2.0 / Complex(3, 1) - 1.0)) < 1e-15);
    CHECK(d3.unitarity_residual() < 1e-14);
}

TEST_CASE("delta-prime coupling constructors") {
    auto a2 = CouplingMatrix::delta_prime(2, 0.0);
    CHECK(std::abs(a2.U(0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(a2.U(0, 0)) < 1e-15);

    for (int p : {1, 2, 3}) {  // d = 2p, beta = 0: the non-Weyl case (b) matrix
        auto u = CouplingMatrix::delta_prime(2 * p, 0.0);
        for (int i = 0; i < 2 * p; ++i)
            for (int j = 0; j < 2 * p; ++j)
                CHECK(std::abs(u.U(i, j) - (-1.0 / p + (i == j ? 1.0 : 0.0))) < 1e-14);
    }
    CHECK(CouplingMatrix::delta_prime(3, 2.0).unitarity_residual() < 1e-14);
}

TEST_CASE("graph validation errors") {
    MetricGraph g;
    g.vertices.push_back({"a", CouplingMatrix::dirichlet(1)});
    g.vertices.push_back({"b", CouplingMatrix::dirichlet(1)});
    g.edges.push_back({0, 1, -1.0, 0.0});
    CHECK_THROWS_AS(g.validate(), InputError);
    g.edges[0].length = 1.0;
    CHECK_NOTHROW(g.validate());
    g.edges[0].to = 7;
    CHECK_THROWS_AS(g.validate(), InputError);
    g.edges[0].to = 1;
    g.leads.push_back({0, 1});  // degree of 'a' becomes 2, coupling is 1x1
    CHECK_THROWS_AS(g.validate(), InputError);
}

TEST_CASE("build_flower: trivial and loop cases") {
    // single vertex, one lead, Dirichlet
    MetricGraph g;
    g.vertices.push_back({"v", CouplingMatrix::dirichlet(1)});
    g.leads.push_back({0, 1});
    auto fl = build_flower(g);
    CHECK(fl.num_edges() == 0);
    CHECK(fl.num_leads == 1);
    CHECK(std::abs(fl.big_U(0, 0) + 1.0) < 1e-15);

    // loop with two leads at a Kirchhoff vertex: big_U = J/2 - I in the
    // (edge-start, edge-end, lead1, lead2) ordering
    MetricGraph loop;
    loop.vertices.push_back({"v", CouplingMatrix::kirchhoff(4)});
    loop.edges.push_back({0, 0, 1.0, 0.0});
    loop.leads.push_back({0, 2});
    auto lf = build_flower(loop);
    CHECK(lf.dim() == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(lf.big_U(i, j) - (0.5 - (i == j ? 1.0 : 0.0))) < 1e-15);
}

TEST_CASE("build_flower matches a hand-written boundary system") {
    // two vertices joined by one edge, one lead each, delta couplings
    const double alpha1 = 0.7, alpha2 = -1.3, l = 0.83;
    MetricGraph g;
    g.vertices.push_back({"v1", CouplingMatrix::delta(2, alpha1)});
    g.vertices.push_back({"v2", CouplingMatrix::delta(2, alpha2)});
    g.edges.push_back({0, 1, l, 0.0});
    g.leads.push_back({0, 1});
    g.leads.push_back({1, 1});
    auto fl = build_flower(g);
    CHECK(fl.dim() == 4);
    // block-diagonal structure: each vertex contributes a 2x2 block 2/(2+ia)J - I
    auto blk = [&](double a) { return CouplingMatrix::delta(2, a).U; };
    CHECK(std::abs(fl.big_U(0, 0) - blk(alpha1)(0, 0)) < 1e-15);
    CHECK(std::abs(fl.big_U(0, 2) - blk(alpha1)(0, 1)) < 1e-15);  // edge-start with lead 1
    CHECK(std::abs(fl.big_U(1, 3) - blk(alpha2)(0, 1)) < 1e-15);  // edge-end with lead 2
    CHECK(std::abs(fl.big_U(0, 1)) < 1e-15);                      // different vertices

    // scattering solve from the flower system vs the raw boundary conditions
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> uk(0.5, 10.0);
    const Eigen::MatrixXcd I4 = Eigen::MatrixXcd::Identity(4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        double k = uk(rng);
        const Complex ik(0, k);
        // flower system: unknowns (a, b, d1, d2), incoming c = (1, 0)
        Eigen::MatrixXcd A = fl.big_U - I4, B = fl.big_U + I4;
        Eigen::MatrixXcd M(4, 4);
        Complex kl = k * l;
        M.col(0) = std::sin(kl) * A.col(1) + ik * (B.col(0) - std::cos(kl) * B.col(1));
        M.col(1) = A.col(0) + std::cos(kl) * A.col(1) + ik * std::sin(kl) * B.col(1);
        M.col(2) = A.col(2) - k * B.col(2);
        M.col(3) = A.col(3) - k * B.col(3);
        Eigen::VectorXcd rhs = -(A.col(2) + k * B.col(2));  // incoming on lead 1
        Eigen::VectorXcd x = M.fullPivLu().solve(rhs);

        // direct system in the same unknowns
        Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(4, 4);
        Eigen::VectorXcd r = Eigen::VectorXcd::Zero(4);
        // v1 continuity: b = 1 + d1
        D(0, 1) = 1;
        D(0, 2) = -1;
        r(0) = 1;
        // v1 delta: k a + ik(d1 - 1) = alpha1 b
        D(1, 0) = k;
        D(1, 1) = -alpha1;
        D(1, 2) = ik;
        r(1) = ik;
        // v2 continuity: a sin kl + b cos kl = d2
        D(2, 0) = std::sin(kl);
        D(2, 1) = std::cos(kl);
        D(2, 3) = -1;
        // v2 delta: -k(a cos kl - b sin kl) + ik d2 = alpha2 (a sin kl + b cos kl)
        D(3, 0) = -k * std::cos(kl) - alpha2 * std::sin(kl);
        D(3, 1) = k * std::sin(kl) - alpha2 * std::cos(kl);
        D(3, 3) = ik;
        Eigen::VectorXcd y = D.fullPivLu().solve(r);
        CHECK((x - y).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("effective coupling") {
    // no leads: U(k) = U1 for all k
    MetricGraph seg;
    seg.vertices.push_back({"a", CouplingMatrix::dirichlet(1)});
    seg.vertices.push_back({"b", CouplingMatrix::dirichlet(1)});
    seg.edges.push_back({0, 1, 1.0, 0.0});
    auto fl = build_flower(seg);
    auto u1 = effective_coupling(fl, Complex(0.7, 0.1));
    CHECK((u1 - fl.big_U).cwiseAbs().maxCoeff() < 1e-15);

    // balanced Kirchhoff vertex (p = q = 1): eigenvalue (1-k)/(1+k)
    MetricGraph bal;
    bal.vertices.push_back({"v", CouplingMatrix::kirchhoff(2)});
    bal.vertices.push_back({"w", CouplingMatrix::dirichlet(1)});
    bal.edges.push_back({0, 1, 1.0, 0.0});
    bal.leads.push_back({0, 1});
    auto bf = build_flower(bal);
    for (Complex k : {Complex(0.3, 0), Complex(2, 0), Complex(1, 1)}) {
        auto ue = effective_vertex_coupling(bf, 0, k);
        REQUIRE(ue.rows() == 1);
        CHECK(std::abs(ue(0, 0) - (1.0 - k) / (1.0 + k)) < 1e-12);
    }
    // k = 1 kills the correction for the full matrix
    auto ue1 = effective_coupling(bf, Complex(1, 0));
    Eigen::MatrixXcd u1_blocks = BlockPartition::from(bf).U1;
    CHECK((ue1 - u1_blocks).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply_magnetic") {
    MetricGraph loop;
    loop.vertices.push_back({"v", CouplingMatrix::kirchhoff(4)});
    loop.edges.push_back({0, 0, 1.0, 0.0});
    loop.leads.push_back({0, 2});
    auto fl = build_flower(loop);
    auto same = apply_magnetic(fl);
    CHECK((same.big_U - fl.big_U).cwiseAbs().maxCoeff() < 1e-15);

    // random unitary coupling and random fluxes: transformed matrix stays unitary
    std::mt19937 rng(99);
    MetricGraph g;
    g.vertices.push_back({"v", CouplingMatrix::from_matrix(oracle::random_unitary(rng, 6))});
    g.edges.push_back({0, 0, 0.8, 1.37});
    g.edges.push_back({0, 0, 1.1, -0.42});
    g.leads.push_back({0, 2});
    auto mf = apply_magnetic(build_flower(g));
    CHECK(CouplingMatrix{mf.big_U}.unitarity_residual() < 1e-13);
    for (double f : mf.fluxes) CHECK(f == 0.0);
}

TEST_CASE("build_flower is involution-safe on a single-vertex graph") {
    MetricGraph loop;
    loop.vertices.push_back({"v", CouplingMatrix::delta(4, 0.9)});
    loop.edges.push_back({0, 0, 1.0, 0.0});
    loop.leads.push_back({0, 2});
    auto f1 = build_flower(loop);
    // rebuild a graph from the flower itself and flower it again
    MetricGraph again;
    again.vertices.push_back({"v", CouplingMatrix::from_matrix(f1.big_U)});
    again.edges.push_back({0, 0, 1.0, 0.0});
    again.leads.push_back({0, 2});
    auto f2 = build_flower(again);
    CHECK((f1.big_U - f2.big_U).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(f1.permutation == f2.permutation);
}

TEST_CASE("graph JSON parsing") {
    const char* text = R"({
      "vertices": [
        {"id": "v", "coupling": {"type": "delta", "alpha": 1.0}},
        {"id": "w", "coupling": {"type": "dirichlet"}}
      ],
      "edges": [{"from": "v", "to": "w", "length": 0.5, "flux": 0.25}],
      "leads": [{"at": "v", "count": 2}]
    })";
    auto g = parse_graph(text);
    CHECK(g.vertices.size() == 2);
    CHECK(g.degree(0) == 3);
    CHECK(g.edges[0].flux == 0.25);

    CHECK_THROWS_AS(parse_graph("{broken"), InputError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": []})"), InputError);
    // unknown vertex reference
    CHECK_THROWS_AS(parse_graph(R"({
      "vertices": [{"id": "v", "coupling": {"type": "dirichlet"}}],
      "edges": [{"from": "v", "to": "nope", "length": 1.0}]})"),
                    InputError);
}
