#pragma once

#include "tvem/approximation.hpp"

#include <functional>
#include <span>
#include <vector>

namespace tvem {

// Diagonal stabilizations in DOF coordinates, built from the projected basis functions Pi phi_i.
enum class HelmholtzStabilization {
    WeightedNorm,     // ||Pi phi_i||_{1,k,K}^2
    AbsConsistency,   // |a^K(Pi phi_i, Pi phi_i)|
    GradientSeminorm  // |Pi phi_i|_{1,K}^2
};

// Target space of the boundary edge projector.
enum class EdgeProjectorTarget {
    TraceSpace,     // filtered plane-wave trace space of the edge (the DOF space)
    ImpedanceSpan   // span of impedance traces ik(1 + d.n) w restricted to the edge
};

struct HelmholtzOptions {
    int q = 3;
    FilterThreshold sigma{};
    HelmholtzStabilization stabilization = HelmholtzStabilization::AbsConsistency;
    EdgeProjectorTarget edge_target = EdgeProjectorTarget::TraceSpace;
    double max_condition = 1e12;  // resonance guard on the local plane-wave stiffness
};

// Element operators. DOFs of local edge i occupy [offsets[i], offsets[i] + space_i.dimension()).
struct HelmholtzElementOperators {
    PlaneWaveBasis basis;
    std::vector<int> offsets;
    Eigen::MatrixXcd dof_of_basis;   // D(dof, m)
    Eigen::MatrixXcd pw_mass;        // (w_m, w_l)_K
    Eigen::MatrixXcd pw_grad;        // (grad w_m, grad w_l)_K
    Eigen::MatrixXcd pw_stiffness;   // a^K(w_m, w_l)
    Eigen::MatrixXcd projector;      // P(m, dof)
    Eigen::MatrixXcd stabilization;  // in DOF coordinates
    Eigen::MatrixXcd local_matrix;   // A(i, j) = a_h^K(phi_j, phi_i)
    double stiffness_condition = 0.0;

    int num_dofs() const { return static_cast<int>(dof_of_basis.rows()); }
    // 1 / ||P|| from the plane-wave weighted norm to the Euclidean DOF norm.
    double beta_proxy() const;
};

// spaces[i] is the trace space of local edge i; directions are shared with the element basis.
HelmholtzElementOperators helmholtz_element_operators(const Polygon& K, double k,
                                                      std::span<const EdgeTraceSpace* const> spaces,
                                                      const HelmholtzOptions& options);

// Evaluates hat w_alpha of an edge with midpoint xe at x.
Complex edge_basis_value(const EdgeTraceSpace& space, double k, const std::vector<Point>& directions,
                         const Point& xe, int alpha, const Point& x);

struct HelmholtzLayout {
    double k = 0.0;
    std::vector<Point> directions;
    std::vector<EdgeTraceSpace> edge_spaces;
    std::vector<int> edge_offset;
    int num_dofs = 0;
};

// L2(e) projection of a boundary trace onto the edge target space, computed from the edge DOFs:
// Pi v = sum_b c_b f_b, c = diag(1/mu) T dofs, f_b = sum_r F(r, b) exp(i k d_r . (x - x_e)).
struct EdgeProjector {
    Eigen::MatrixXcd T;  // target x edge DOFs
    Eigen::VectorXd mu;  // squared norms of the f_b
    Eigen::MatrixXcd F;  // raw traces x target

    Eigen::VectorXcd coefficients(const Eigen::VectorXcd& dofs) const { return mu.cwiseInverse().asDiagonal() * (T * dofs); }
};

// E.normal must be the outward normal of the element owning the edge.
EdgeProjector edge_projector(const EdgeTraceSpace& space, const Edge& E, const std::vector<Point>& directions,
                             const HelmholtzOptions& options);

HelmholtzLayout helmholtz_layout(const PolygonalMesh& mesh, double k, const HelmholtzOptions& options);

Eigen::VectorXcd interpolate_helmholtz(const PolygonalMesh& mesh, const HelmholtzLayout& layout,
                                       const std::function<Complex(const Point&)>& u);

struct HelmholtzSolution {
    HelmholtzLayout layout;
    Eigen::VectorXcd dofs;
    std::vector<Eigen::MatrixXcd> projectors;
    std::vector<PlaneWaveBasis> bases;
    double min_singular_value = -1.0;  // set on request
    double max_stiffness_condition = 0.0;
};

// Impedance data g(x, n) = ik u + n . grad u.
using ImpedanceData = std::function<Complex(const Point&, const Point&)>;

ImpedanceData impedance_data(const ComplexField& u, double k);

HelmholtzSolution solve_helmholtz(const PolygonalMesh& mesh, double k, const ImpedanceData& g,
                                  const HelmholtzOptions& options, bool compute_min_singular_value = false);

Eigen::VectorXcd local_helmholtz_dofs(const PolygonalMesh& mesh, const HelmholtzLayout& layout, std::size_t element,
                                      const Eigen::VectorXcd& global);

// ||u - Pi u_h||_{1,k,T_h}
double helmholtz_projected_error(const PolygonalMesh& mesh, const HelmholtzSolution& uh, const ComplexField& u);

double helmholtz_weighted_norm(const PolygonalMesh& mesh, const ComplexField& u, double k);

struct StabilitySamples {
    double coercivity_defect = 0.0;  // max over samples of (|v|_1^2 - S(v,v)) / (k^2 ||v||_0^2) - 1
    double continuity = 0.0;         // max |S(u,v)| / (||u||_{1,k} ||v||_{1,k})
};

// Samples the stabilization inequalities on ker(Pi). norms(v) returns {|v|_1^2, ||v||_0^2} for a DOF vector.
StabilitySamples sample_helmholtz_stability(
    const HelmholtzElementOperators& ops, double k,
    const std::function<std::pair<double, double>(const Eigen::VectorXcd&)>& norms, int samples, unsigned seed);

}  // namespace tvem
