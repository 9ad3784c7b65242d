#pragma once

#include "tvem/approximation.hpp"

#include <Eigen/Sparse>

#include <array>

namespace tvem {

struct PwdgFluxes {
    double alpha = 0.5;
    double beta = 0.5;
};

// One side of an interior edge: the adjacent element's plane-wave centre and sign such that its
// outward normal is sign * n.
struct PwdgSide {
    Point center = Point::Zero();
    int sign = 1;
};

// Edge coupling blocks: blocks[b][a](l, m) is the edge part of a_n(w_m on side a, w_l on side b).
using PwdgEdgeBlocks = std::array<std::array<Eigen::MatrixXcd, 2>, 2>;

PwdgEdgeBlocks pwdg_edge_blocks(const Point& a, const Point& b, const Point& normal, double k,
                                const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                                const PwdgFluxes& fluxes);

// The same blocks split into the consistency part and the penalty (alpha, beta) part.
struct PwdgEdgeParts {
    PwdgEdgeBlocks consistency;
    PwdgEdgeBlocks penalty;
};
PwdgEdgeParts pwdg_edge_parts(const Point& a, const Point& b, const Point& normal, double k,
                              const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                              const PwdgFluxes& fluxes);

// a^K(w_m, w_l) for element-centred plane waves.
Eigen::MatrixXcd pwdg_volume_block(const Polygon& K, double k, const std::vector<Point>& directions);

// Edge contribution for coefficient vectors u[side], v[side].
Complex jump_average_terms(const Point& a, const Point& b, const Point& normal, double k,
                           const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                           const PwdgFluxes& fluxes, const std::array<Eigen::VectorXcd, 2>& u,
                           const std::array<Eigen::VectorXcd, 2>& v);

// Global matrix over all elements and interior edges; unknown (K, l) has index K*p + l.
// A(i, j) = a_n(phi_j, phi_i).
Eigen::SparseMatrix<Complex> assemble_pwdg(const PolygonalMesh& mesh, double k, int q, const PwdgFluxes& fluxes);

}  // namespace tvem
