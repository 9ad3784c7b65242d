#pragma once

#include "tvem/approximation.hpp"

#include <functional>
#include <span>
#include <vector>

namespace tvem {

enum class LaplaceStabilization { Identity, DiagonalRecipe };

struct LaplaceOptions {
    int p = 2;
    LaplaceStabilization stabilization = LaplaceStabilization::Identity;
};

// Element operators of the nonconforming harmonic VEM. DOFs are scaled Legendre moments
// (1/h_e) int_e v m_alpha; local DOF (i, alpha) has index i*p + alpha, with m_alpha
// parametrised along the orientation given for local edge i.
struct LaplaceElementOperators {
    HarmonicPolyBasis basis;
    int p = 0;
    Eigen::MatrixXd dof_of_basis;    // D(dof, j) = dof of q_j
    Eigen::MatrixXd projector;       // P(j, dof): coefficients of the projection of a DOF function
    Eigen::MatrixXd poly_stiffness;  // G(i, j) = a(q_j, q_i)
    Eigen::MatrixXd stabilization;   // in DOF coordinates
    Eigen::MatrixXd local_matrix;

    int num_dofs() const { return static_cast<int>(dof_of_basis.rows()); }
};

// orientation[i] = +1 if local edge i is parametrised counter-clockwise, -1 otherwise;
// empty means all counter-clockwise.
LaplaceElementOperators laplace_element_operators(const Polygon& K, const LaplaceOptions& options,
                                                  std::span<const int> orientation = {});

// Global DOF index of (edge e, alpha) is e*p + alpha.
Eigen::VectorXd interpolate_laplace(const PolygonalMesh& mesh, int p, const std::function<double(const Point&)>& u);

struct LaplaceSolution {
    int p = 0;
    Eigen::VectorXd dofs;
    std::vector<Eigen::MatrixXd> projectors;  // per element
    std::vector<HarmonicPolyBasis> bases;
    std::size_t num_free_dofs = 0;
};

// Solves -Laplace u = 0 with Dirichlet data g (imposed through edge moments).
LaplaceSolution solve_laplace(const PolygonalMesh& mesh, const std::function<double(const Point&)>& g,
                              const LaplaceOptions& options);

Eigen::VectorXd element_dofs(const PolygonalMesh& mesh, int p, std::size_t element, const Eigen::VectorXd& global);

// Per-element projections of a global DOF vector.
LaplaceSolution project_laplace(const PolygonalMesh& mesh, const Eigen::VectorXd& dofs, const LaplaceOptions& options);

// |u - Pi u_h|_{1,h}
double laplace_projected_error(const PolygonalMesh& mesh, const LaplaceSolution& uh, const RealField& u);

// sum_e int_e grad u . [[v]]: the P_{p-1}(e) component of grad u . n_e annihilates [[v]] exactly, the
// remainder is paired with the jump of the element projections.
double nonconformity_measure(const RealField& u, const PolygonalMesh& mesh, const LaplaceSolution& vh,
                             bool include_boundary = true);

struct StabilityEstimate {
    double lower = 0.0;
    double upper = 0.0;
};

// Sampled bounds of S(v,v) / |v|_1^2 over v in ker(Pi); seminorm_squared evaluates |v|_{1,K}^2 from DOFs.
StabilityEstimate estimate_laplace_stability(const LaplaceElementOperators& ops,
                                             const std::function<double(const Eigen::VectorXd&)>& seminorm_squared,
                                             int samples, unsigned seed);

}  // namespace tvem
