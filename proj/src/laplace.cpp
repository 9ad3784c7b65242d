#include "tvem/laplace.hpp"

#include "tvem/quadrature.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <random>

namespace tvem {

namespace {

struct EdgeEnds {
    Point a, b;
};

EdgeEnds oriented(const Polygon& K, std::size_t i, int orientation) {
    if (orientation >= 0) return {K.edge_start(i), K.edge_end(i)};
    return {K.edge_end(i), K.edge_start(i)};
}

std::vector<int> element_orientation(const PolygonalMesh& mesh, std::size_t k) {
    const auto& edges = mesh.element_edges(k);
    std::vector<int> o(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) o[i] = mesh.jump_sign(edges[i], static_cast<int>(k));
    return o;
}

}  // namespace

LaplaceElementOperators laplace_element_operators(const Polygon& K, const LaplaceOptions& options,
                                                  std::span<const int> orientation) {
    const int p = options.p;
    if (p < 1) throw InvalidArgument("Laplace degree p must be >= 1");
    if (!orientation.empty() && orientation.size() != K.size())
        throw InvalidArgument("orientation size does not match polygon");
    LaplaceElementOperators ops{HarmonicPolyBasis(p, K.barycenter(), K.diameter()), p, {}, {}, {}, {}, {}};
    const int m = static_cast<int>(K.size());
    const int ndof = m * p;
    const int nb = ops.basis.size();

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(ndof, nb);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nb, ndof);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::RowVectorXd boundary_mean = Eigen::RowVectorXd::Zero(nb);
    Eigen::RowVectorXd boundary_mean_dofs = Eigen::RowVectorXd::Zero(ndof);

    for (int i = 0; i < m; ++i) {
        const EdgeEnds ends = oriented(K, i, orientation.empty() ? 1 : orientation[i]);
        const double he = K.edge_length(i);
        const Point n = K.edge_normal(i);
        const QuadratureRule r = segment_rule(ends.a, ends.b, p + 2);
        for (std::size_t t = 0; t < r.size(); ++t) {
            const Point& x = r.points[t];
            const double w = r.weights[t];
            Eigen::VectorXd q(nb), dn(nb);
            for (int j = 0; j < nb; ++j) {
                q(j) = ops.basis.value(j, x);
                dn(j) = n.dot(ops.basis.gradient(j, x));
            }
            for (int alpha = 0; alpha < p; ++alpha) {
                const double ma = edge_legendre(alpha, ends.a, ends.b, x);
                D.row(i * p + alpha) += (w * ma / he) * q.transpose();
                B.col(i * p + alpha) += ((2.0 * alpha + 1.0) * w * ma) * dn;
            }
            G += w * dn * q.transpose();
            boundary_mean += w * q.transpose();
        }
        boundary_mean_dofs(i * p) = he;
    }
    G = 0.5 * (G + G.transpose()).eval();

    Eigen::MatrixXd Gt = G;
    Eigen::MatrixXd Bt = B;
    Gt.row(0) = boundary_mean;
    Bt.row(0) = boundary_mean_dofs;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Gt);
    if (!lu.isInvertible()) throw SingularSystem("harmonic projector system is singular");
    ops.dof_of_basis = D;
    ops.projector = lu.solve(Bt);
    ops.poly_stiffness = G;

    const Eigen::MatrixXd consistency = ops.projector.transpose() * G * ops.projector;
    switch (options.stabilization) {
    case LaplaceStabilization::Identity: ops.stabilization = Eigen::MatrixXd::Identity(ndof, ndof); break;
    case LaplaceStabilization::DiagonalRecipe: {
        const double floor = 1e-12 * consistency.trace();
        ops.stabilization = consistency.diagonal().cwiseMax(floor).asDiagonal();
        break;
    }
    }
    const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(ndof, ndof) - D * ops.projector;
    ops.local_matrix = consistency + R.transpose() * ops.stabilization * R;
    ops.local_matrix = 0.5 * (ops.local_matrix + ops.local_matrix.transpose()).eval();
    return ops;
}

Eigen::VectorXd interpolate_laplace(const PolygonalMesh& mesh, int p, const std::function<double(const Point&)>& u) {
    Eigen::VectorXd dofs(static_cast<Eigen::Index>(mesh.num_edges()) * p);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& E = mesh.edge(e);
        const QuadratureRule r = segment_rule(E.a, E.b, p + 12);
        for (int alpha = 0; alpha < p; ++alpha) {
            double s = 0.0;
            for (std::size_t t = 0; t < r.size(); ++t)
                s += r.weights[t] * u(r.points[t]) * edge_legendre(alpha, E.a, E.b, r.points[t]);
            dofs(static_cast<Eigen::Index>(e) * p + alpha) = s / E.length;
        }
    }
    return dofs;
}

Eigen::VectorXd element_dofs(const PolygonalMesh& mesh, int p, std::size_t element, const Eigen::VectorXd& global) {
    const auto& edges = mesh.element_edges(element);
    Eigen::VectorXd local(static_cast<Eigen::Index>(edges.size()) * p);
    for (std::size_t i = 0; i < edges.size(); ++i)
        local.segment(static_cast<Eigen::Index>(i) * p, p) = global.segment(static_cast<Eigen::Index>(edges[i]) * p, p);
    return local;
}

LaplaceSolution project_laplace(const PolygonalMesh& mesh, const Eigen::VectorXd& dofs, const LaplaceOptions& options) {
    LaplaceSolution s;
    s.p = options.p;
    s.dofs = dofs;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const auto o = element_orientation(mesh, k);
        LaplaceElementOperators ops = laplace_element_operators(mesh.element(k), options, o);
        s.projectors.push_back(std::move(ops.projector));
        s.bases.push_back(std::move(ops.basis));
    }
    return s;
}

LaplaceSolution solve_laplace(const PolygonalMesh& mesh, const std::function<double(const Point&)>& g,
                              const LaplaceOptions& options) {
    const int p = options.p;
    const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_edges()) * p;
    const Eigen::VectorXd boundary = interpolate_laplace(mesh, p, g);

    std::vector<Eigen::Index> free_index(n, -1);
    Eigen::Index nfree = 0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        if (!mesh.edge(e).is_boundary())
            for (int a = 0; a < p; ++a) free_index[static_cast<Eigen::Index>(e) * p + a] = nfree++;

    LaplaceSolution s;
    s.p = p;
    s.num_free_dofs = static_cast<std::size_t>(nfree);
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nfree);
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const auto o = element_orientation(mesh, k);
        LaplaceElementOperators ops = laplace_element_operators(mesh.element(k), options, o);
        const auto& edges = mesh.element_edges(k);
        std::vector<Eigen::Index> gi;
        for (int e : edges)
            for (int a = 0; a < p; ++a) gi.push_back(static_cast<Eigen::Index>(e) * p + a);
        for (std::size_t i = 0; i < gi.size(); ++i) {
            const Eigen::Index fi = free_index[gi[i]];
            if (fi < 0) continue;
            for (std::size_t j = 0; j < gi.size(); ++j) {
                const double v = ops.local_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                const Eigen::Index fj = free_index[gi[j]];
                if (fj >= 0)
                    trip.emplace_back(fi, fj, v);
                else
                    rhs(fi) -= v * boundary(gi[j]);
            }
        }
        s.projectors.push_back(std::move(ops.projector));
        s.bases.push_back(std::move(ops.basis));
    }
    s.dofs = boundary;
    if (nfree > 0) {
        Eigen::SparseMatrix<double> A(nfree, nfree);
        A.setFromTriplets(trip.begin(), trip.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
        if (solver.info() != Eigen::Success) throw SingularSystem("Laplace system factorisation failed");
        const Eigen::VectorXd x = solver.solve(rhs);
        if (solver.info() != Eigen::Success || !x.allFinite()) throw SingularSystem("Laplace solve failed");
        for (Eigen::Index i = 0; i < n; ++i)
            if (free_index[i] >= 0) s.dofs(i) = x(free_index[i]);
    }
    return s;
}

namespace {

Eigen::VectorXd projection_coefficients(const PolygonalMesh& mesh, const LaplaceSolution& uh, std::size_t k) {
    return uh.projectors[k] * element_dofs(mesh, uh.p, k, uh.dofs);
}

double eval_projection(const HarmonicPolyBasis& basis, const Eigen::VectorXd& c, const Point& x) {
    double v = 0.0;
    for (int j = 0; j < basis.size(); ++j) v += c(j) * basis.value(j, x);
    return v;
}

}  // namespace

double laplace_projected_error(const PolygonalMesh& mesh, const LaplaceSolution& uh, const RealField& u) {
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const Eigen::VectorXd c = projection_coefficients(mesh, uh, k);
        const QuadratureRule r = polygon_rule(mesh.element(k), uh.p + 8);
        for (std::size_t t = 0; t < r.size(); ++t) {
            Eigen::Vector2d g = u.gradient(r.points[t]);
            for (int j = 1; j < uh.bases[k].size(); ++j) g -= c(j) * uh.bases[k].gradient(j, r.points[t]);
            total += r.weights[t] * g.squaredNorm();
        }
    }
    return std::sqrt(total);
}

double nonconformity_measure(const RealField& u, const PolygonalMesh& mesh, const LaplaceSolution& vh,
                             bool include_boundary) {
    const int p = vh.p;
    std::vector<Eigen::VectorXd> coeffs(mesh.num_elements());
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) coeffs[k] = projection_coefficients(mesh, vh, k);
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& E = mesh.edge(e);
        if (E.is_boundary() && !include_boundary) continue;
        const QuadratureRule r = segment_rule(E.a, E.b, p + 12);
        // Remove the P_{p-1} part of the normal flux.
        Eigen::VectorXd flux(static_cast<Eigen::Index>(r.size()));
        for (std::size_t t = 0; t < r.size(); ++t) flux(t) = E.normal.dot(u.gradient(r.points[t]));
        Eigen::VectorXd proj = Eigen::VectorXd::Zero(flux.size());
        for (int alpha = 0; alpha < p; ++alpha) {
            double c = 0.0;
            for (std::size_t t = 0; t < r.size(); ++t)
                c += r.weights[t] * flux(t) * edge_legendre(alpha, E.a, E.b, r.points[t]);
            c *= (2.0 * alpha + 1.0) / E.length;
            for (std::size_t t = 0; t < r.size(); ++t) proj(t) += c * edge_legendre(alpha, E.a, E.b, r.points[t]);
        }
        for (std::size_t t = 0; t < r.size(); ++t) {
            const Point& x = r.points[t];
            double jump = eval_projection(vh.bases[E.elements[0]], coeffs[E.elements[0]], x);
            if (!E.is_boundary()) jump -= eval_projection(vh.bases[E.elements[1]], coeffs[E.elements[1]], x);
            total += r.weights[t] * (flux(t) - proj(t)) * jump;
        }
    }
    return total;
}

StabilityEstimate estimate_laplace_stability(const LaplaceElementOperators& ops,
                                             const std::function<double(const Eigen::VectorXd&)>& seminorm_squared,
                                             int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const int n = ops.num_dofs();
    const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n) - ops.dof_of_basis * ops.projector;
    StabilityEstimate est{std::numeric_limits<double>::infinity(), 0.0};
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u(i) = normal(rng);
        const Eigen::VectorXd v = R * u;
        const double semi = seminorm_squared(v);
        if (!(semi > 0.0)) continue;
        const double ratio = v.dot(ops.stabilization * v) / semi;
        est.lower = std::min(est.lower, ratio);
        est.upper = std::max(est.upper, ratio);
    }
    return est;
}

}  // namespace tvem
