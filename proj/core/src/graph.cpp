#include "reslab/graph.hpp"

#include <cmath>
#include <set>

namespace reslab {

namespace {
constexpr double kUnitarityTol = 1e-12;
}

double CouplingMatrix::unitarity_residual() const {
    Eigen::MatrixXcd r = U.adjoint() * U - Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    return r.cwiseAbs().maxCoeff();
}

CouplingMatrix CouplingMatrix::delta(int degree, double alpha) {
    if (degree < 1) throw InputError("delta coupling: degree must be >= 1");
    Complex f = 2.0 / Complex(degree, alpha);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Constant(degree, degree, f);
    U.diagonal().array() -= 1.0;
    return {std::move(U)};
}

CouplingMatrix CouplingMatrix::delta_prime(int degree, double beta) {
    if (degree < 1) throw InputError("delta' coupling: degree must be >= 1");
    Complex f = -2.0 / Complex(degree, -beta);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Constant(degree, degree, f);
    U.diagonal().array() += 1.0;
    return {std::move(U)};
}

CouplingMatrix CouplingMatrix::dirichlet(int degree) {
    if (degree < 1) throw InputError("dirichlet coupling: degree must be >= 1");
    return {-Eigen::MatrixXcd::Identity(degree, degree)};
}

CouplingMatrix CouplingMatrix::from_matrix(Eigen::MatrixXcd U) {
    if (U.rows() != U.cols()) throw InputError("coupling matrix must be square");
    CouplingMatrix c{std::move(U)};
    if (c.unitarity_residual() > kUnitarityTol)
        throw InputError("coupling matrix is not unitary (residual " +
                         std::to_string(c.unitarity_residual()) + ")");
    return c;
}

CouplingMatrix CouplingMatrix::from_boundary_conditions(const Eigen::MatrixXcd& A,
                                                        const Eigen::MatrixXcd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw InputError("boundary conditions: A and B must be square and same size");
    Eigen::MatrixXcd M = A + Complex(0, 1) * B;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (!lu.isInvertible())
        throw InputError("boundary conditions do not define a self-adjoint coupling "
                         "(A + iB singular)");
    Eigen::MatrixXcd U = -lu.solve(A - Complex(0, 1) * B);
    return from_matrix(std::move(U));
}

int MetricGraph::degree(int vertex) const {
    int d = 0;
    for (const auto& e : edges) {
        if (e.from == vertex) ++d;
        if (e.to == vertex) ++d;
    }
    for (const auto& l : leads)
        if (l.at == vertex) d += l.count;
    return d;
}

double MetricGraph::total_edge_length() const {
    double v = 0.0;
    for (const auto& e : edges) v += e.length;
    return v;
}

void MetricGraph::validate() const {
    const int nv = static_cast<int>(vertices.size());
    if (nv == 0) throw InputError("graph has no vertices");
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= nv || e.to < 0 || e.to >= nv)
            throw InputError("edge endpoint references a missing vertex");
        if (!(e.length > 0.0) || !std::isfinite(e.length))
            throw InputError("edge length must be strictly positive and finite");
        if (!std::isfinite(e.flux)) throw InputError("edge flux must be finite");
    }
    for (const auto& l : leads) {
        if (l.at < 0 || l.at >= nv) throw InputError("lead references a missing vertex");
        if (l.count < 1) throw InputError("lead count must be >= 1");
    }
    for (int v = 0; v < nv; ++v) {
        int d = degree(v);
        if (d == 0)
            throw InputError("vertex '" + vertices[v].id + "' is isolated");
        if (vertices[v].coupling.degree() != d)
            throw InputError("vertex '" + vertices[v].id + "': coupling dimension " +
                             std::to_string(vertices[v].coupling.degree()) +
                             " != vertex degree " + std::to_string(d));
        if (vertices[v].coupling.unitarity_residual() > kUnitarityTol)
            throw InputError("vertex '" + vertices[v].id + "': coupling not unitary");
    }
}

double FlowerForm::total_length() const {
    double v = 0.0;
    for (double l : edge_lengths) v += l;
    return v;
}

FlowerForm build_flower(const MetricGraph& graph) {
    graph.validate();
    const int N = static_cast<int>(graph.edges.size());
    int M = 0;
    for (const auto& l : graph.leads) M += l.count;
    const int dim = 2 * N + M;

    FlowerForm fl;
    fl.big_U = Eigen::MatrixXcd::Zero(dim, dim);
    fl.num_leads = M;
    for (const auto& e : graph.edges) {
        fl.edge_lengths.push_back(e.length);
        fl.fluxes.push_back(e.flux);
    }

    // flower slot of each (edge endpoint | lead) in quick lookup form
    int lead_base = 2 * N;
    std::vector<std::vector<int>> lead_slots_of_record;
    {
        int next = lead_base;
        for (const auto& l : graph.leads) {
            std::vector<int> s;
            for (int c = 0; c < l.count; ++c) s.push_back(next++);
            lead_slots_of_record.push_back(std::move(s));
        }
    }

    for (int v = 0; v < static_cast<int>(graph.vertices.size()); ++v) {
        FlowerVertex fv;
        fv.id = graph.vertices[v].id;
        for (int j = 0; j < N; ++j) {
            if (graph.edges[j].from == v) fv.internal_slots.push_back(2 * j);
            if (graph.edges[j].to == v) fv.internal_slots.push_back(2 * j + 1);
        }
        for (size_t r = 0; r < graph.leads.size(); ++r)
            if (graph.leads[r].at == v)
                for (int s : lead_slots_of_record[r]) fv.lead_slots.push_back(s);

        std::vector<int> slots = fv.internal_slots;
        slots.insert(slots.end(), fv.lead_slots.begin(), fv.lead_slots.end());
        const auto& U = graph.vertices[v].coupling.U;
        for (int a = 0; a < static_cast<int>(slots.size()); ++a)
            for (int b = 0; b < static_cast<int>(slots.size()); ++b)
                fl.big_U(slots[a], slots[b]) = U(a, b);
        for (int s : slots) fl.permutation.push_back(s);
        fl.vertex_slots.push_back(std::move(fv));
    }
    return fl;
}

BlockPartition BlockPartition::from(const FlowerForm& flower) {
    const int n2 = 2 * flower.num_edges();
    const int M = flower.num_leads;
    BlockPartition b;
    b.U1 = flower.big_U.topLeftCorner(n2, n2);
    b.U2 = flower.big_U.topRightCorner(n2, M);
    b.U3 = flower.big_U.bottomLeftCorner(M, n2);
    b.U4 = flower.big_U.bottomRightCorner(M, M);
    return b;
}

namespace {

Eigen::MatrixXcd effective_from_blocks(const Eigen::MatrixXcd& U1, const Eigen::MatrixXcd& U2,
                                       const Eigen::MatrixXcd& U3, const Eigen::MatrixXcd& U4,
                                       Complex k) {
    const int M = static_cast<int>(U4.rows());
    if (M == 0) return U1;
    Eigen::MatrixXcd inner =
        (1.0 - k) * U4 - (k + 1.0) * Eigen::MatrixXcd::Identity(M, M);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(inner, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(M - 1);
    if (!(smin > 1e-12 * std::max(smax, 1.0))) throw SingularInnerMatrix(k);
    Eigen::MatrixXcd sol = svd.solve(U3);
    return U1 - (1.0 - k) * U2 * sol;
}

}  // namespace

Eigen::MatrixXcd effective_coupling(const BlockPartition& b, Complex k) {
    return effective_from_blocks(b.U1, b.U2, b.U3, b.U4, k);
}

Eigen::MatrixXcd effective_coupling(const FlowerForm& flower, Complex k) {
    return effective_coupling(BlockPartition::from(flower), k);
}

Eigen::MatrixXcd effective_vertex_coupling(const FlowerForm& flower, int vertex, Complex k) {
    const auto& fv = flower.vertex_slots.at(vertex);
    const auto pick = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
        Eigen::MatrixXcd m(rows.size(), cols.size());
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j) m(i, j) = flower.big_U(rows[i], cols[j]);
        return m;
    };
    return effective_from_blocks(pick(fv.internal_slots, fv.internal_slots),
                                 pick(fv.internal_slots, fv.lead_slots),
                                 pick(fv.lead_slots, fv.internal_slots),
                                 pick(fv.lead_slots, fv.lead_slots), k);
}

FlowerForm apply_magnetic(const FlowerForm& flower) {
    const int dim = flower.dim();
    Eigen::VectorXcd F = Eigen::VectorXcd::Ones(dim);
    for (int j = 0; j < flower.num_edges(); ++j)
        F(2 * j + 1) = std::exp(Complex(0, flower.fluxes[j]));
    FlowerForm out = flower;
    out.big_U = F.asDiagonal() * flower.big_U * F.conjugate().asDiagonal();
    std::fill(out.fluxes.begin(), out.fluxes.end(), 0.0);
    return out;
}

}  // namespace reslab
