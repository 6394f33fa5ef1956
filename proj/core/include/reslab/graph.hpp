#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "reslab/common.hpp"

namespace reslab {

/// Unitary vertex coupling matrix U; boundary conditions read
/// (U - I) Psi + i (U + I) Psi' = 0 with Psi' the outward derivatives.
struct CouplingMatrix {
    Eigen::MatrixXcd U;

    int degree() const { return static_cast<int>(U.rows()); }
    double unitarity_residual() const;

    /// delta coupling of strength alpha: U = 2/(d+i alpha) J - I.
    static CouplingMatrix delta(int degree, double alpha);
    /// delta'_s coupling of strength beta: U = -2/(d-i beta) J + I.
    static CouplingMatrix delta_prime(int degree, double beta);
    static CouplingMatrix kirchhoff(int degree) { return delta(degree, 0.0); }
    static CouplingMatrix anti_kirchhoff(int degree) { return delta_prime(degree, 0.0); }
    /// Fully decoupled Dirichlet ends: U = -I.
    static CouplingMatrix dirichlet(int degree);
    /// Arbitrary unitary matrix; validates |U U^dag - I|_max <= 1e-12.
    static CouplingMatrix from_matrix(Eigen::MatrixXcd U);
    /// Build U from general self-adjoint boundary conditions A Psi + B Psi' = 0:
    /// U = -(A + iB)^{-1} (A - iB).
    static CouplingMatrix from_boundary_conditions(const Eigen::MatrixXcd& A,
                                                   const Eigen::MatrixXcd& B);
};

struct Vertex {
    std::string id;
    CouplingMatrix coupling;
};

struct Edge {
    int from = 0;
    int to = 0;
    double length = 0.0;
    double flux = 0.0;  // magnetic flux along the edge, radians
};

struct Lead {
    int at = 0;
    int count = 1;
};

/// Metric graph: finite edges with lengths (and optional magnetic fluxes),
/// semi-infinite leads, and a unitary coupling at every vertex.  Loops and
/// multi-edges are allowed; an edge endpoint at vertex v contributes one slot
/// to v's boundary-value vector.
///
/// Vertex-local slot order (fixed; raw-matrix couplings must follow it):
/// edge endpoints in edge order (for a loop, the x=0 end before the x=l end),
/// then leads in declaration order.
struct MetricGraph {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Lead> leads;

    int degree(int vertex) const;
    double total_edge_length() const;
    /// Throws InputError when an invariant fails (positive finite lengths,
    /// valid endpoints, coupling dimension == degree, unitarity).
    void validate() const;
};

/// Slot bookkeeping for one original vertex inside the flower form.
struct FlowerVertex {
    std::string id;
    std::vector<int> internal_slots;  // positions among rows 0..2N-1
    std::vector<int> lead_slots;      // positions among rows 2N..2N+M-1
};

/// Single-vertex (flower) representation: edge j occupies rows/columns 2j
/// (x=0 end) and 2j+1 (x=l_j end), leads fill the last M slots.  big_U is the
/// per-vertex block-diagonal coupling permuted to this ordering.
struct FlowerForm {
    Eigen::MatrixXcd big_U;
    std::vector<double> edge_lengths;
    std::vector<double> fluxes;
    int num_leads = 0;
    std::vector<FlowerVertex> vertex_slots;
    /// permutation[p] = flower slot of the p-th slot in vertex ordering
    std::vector<int> permutation;

    int num_edges() const { return static_cast<int>(edge_lengths.size()); }
    int dim() const { return 2 * num_edges() + num_leads; }
    double total_length() const;
};

struct BlockPartition {
    Eigen::MatrixXcd U1, U2, U3, U4;
    static BlockPartition from(const FlowerForm& flower);
};

FlowerForm build_flower(const MetricGraph& graph);

/// Effective energy-dependent coupling over the internal slots:
/// U(k) = U1 - (1-k) U2 [(1-k) U4 - (k+1) I]^{-1} U3.
/// Throws SingularInnerMatrix at isolated k where the bracket is singular.
Eigen::MatrixXcd effective_coupling(const BlockPartition& blocks, Complex k);
Eigen::MatrixXcd effective_coupling(const FlowerForm& flower, Complex k);
/// Same reduction restricted to one original vertex of the flower.
Eigen::MatrixXcd effective_vertex_coupling(const FlowerForm& flower, int vertex, Complex k);

/// Gauge transform: returns the flower with U_A = F U F^{-1},
/// F = diag(1, e^{i Phi_1}, ..., 1, e^{i Phi_N}, 1, ..., 1), and all fluxes zero.
FlowerForm apply_magnetic(const FlowerForm& flower);

}  // namespace reslab
