#include "tvem/helmholtz.hpp"

#include "tvem/quadrature.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <random>

namespace tvem {

double HelmholtzElementOperators::beta_proxy() const {
    const Eigen::MatrixXcd N = pw_grad + basis.k() * basis.k() * pw_mass;
    const Eigen::MatrixXcd PNP = projector.adjoint() * N * projector;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (PNP + PNP.adjoint()));
    const double top = es.eigenvalues().maxCoeff();
    return top > 0.0 ? 1.0 / std::sqrt(top) : 0.0;
}

Complex edge_basis_value(const EdgeTraceSpace& space, double k, const std::vector<Point>& directions,
                         const Point& xe, int alpha, const Point& x) {
    Complex v = 0.0;
    for (int r = 0; r < space.raw_dimension(); ++r)
        v += space.Q(r, alpha) * std::exp(I_unit * (k * directions[r].dot(x - xe)));
    return v;
}

HelmholtzElementOperators helmholtz_element_operators(const Polygon& K, double k,
                                                      std::span<const EdgeTraceSpace* const> spaces,
                                                      const HelmholtzOptions& options) {
    if (spaces.size() != K.size()) throw InvalidArgument("one edge trace space per polygon edge is required");
    HelmholtzElementOperators ops{PlaneWaveBasis(k, options.q, K.barycenter()), {}, {}, {}, {}, {}, {}, {}, {}, 0.0};
    const auto& dirs = ops.basis.directions();
    const int p = ops.basis.size();
    int ndof = 0;
    for (const auto* s : spaces) {
        if (s->raw_dimension() != p) throw InvalidArgument("edge trace space does not match the plane-wave basis");
        ops.offsets.push_back(ndof);
        ndof += s->dimension();
    }

    Eigen::MatrixXcd D(ndof, p);
    Eigen::MatrixXcd B(p, ndof);
    for (std::size_t i = 0; i < K.size(); ++i) {
        const EdgeTraceSpace& s = *spaces[i];
        const Point xe = K.edge_midpoint(i);
        const Point n = K.edge_normal(i);
        const double he = K.edge_length(i);
        const Eigen::MatrixXcd QhG = s.Q.adjoint() * s.gram;  // = Lambda Q^H
        for (int m = 0; m < p; ++m) {
            const Complex ph = std::exp(I_unit * (k * dirs[m].dot(xe - K.barycenter())));
            D.block(ops.offsets[i], m, s.dimension(), 1) = (ph / he) * QhG.col(m);
            B.block(m, ops.offsets[i], 1, s.dimension()) =
                (-I_unit * k * dirs[m].dot(n) * std::conj(ph) * he) * s.Q.row(m);
        }
    }
    const PlaneWaveElementMatrices pw = plane_wave_element_matrices(ops.basis, K);
    ops.pw_mass = pw.mass;
    ops.pw_grad = pw.grad;
    ops.pw_stiffness = pw.grad - k * k * pw.mass;
    ops.pw_stiffness = 0.5 * (ops.pw_stiffness + ops.pw_stiffness.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops.pw_stiffness, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseAbs();
    ops.stiffness_condition = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff() : std::numeric_limits<double>::infinity();
    if (!(ops.stiffness_condition <= options.max_condition))
        throw ResonanceProximity("local plane-wave stiffness condition " + std::to_string(ops.stiffness_condition) +
                                 " exceeds " + std::to_string(options.max_condition));

    ops.dof_of_basis = D;
    ops.projector = ops.pw_stiffness.fullPivLu().solve(B);

    const Eigen::MatrixXcd consistency = ops.projector.adjoint() * ops.pw_stiffness * ops.projector;
    Eigen::VectorXd s(ndof);
    for (int i = 0; i < ndof; ++i) {
        const Eigen::VectorXcd c = ops.projector.col(i);
        switch (options.stabilization) {
        case HelmholtzStabilization::WeightedNorm:
            s(i) = std::real(c.dot((pw.grad + k * k * pw.mass) * c));
            break;
        case HelmholtzStabilization::AbsConsistency: s(i) = std::abs(c.dot(ops.pw_stiffness * c)); break;
        case HelmholtzStabilization::GradientSeminorm: s(i) = std::real(c.dot(pw.grad * c)); break;
        }
    }
    const double floor = 1e-12 * s.maxCoeff();
    ops.stabilization = s.cwiseMax(floor).cast<Complex>().asDiagonal();
    const Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(ndof, ndof) - D * ops.projector;
    ops.local_matrix = consistency + R.adjoint() * ops.stabilization * R;
    ops.local_matrix = 0.5 * (ops.local_matrix + ops.local_matrix.adjoint()).eval();
    return ops;
}

HelmholtzLayout helmholtz_layout(const PolygonalMesh& mesh, double k, const HelmholtzOptions& options) {
    HelmholtzLayout l;
    l.k = k;
    l.directions = equispaced_directions(2 * options.q + 1);
    int offset = 0;
    for (const Edge& e : mesh.edges()) {
        l.edge_spaces.push_back(plane_wave_edge_space(k, l.directions, e.length, e.tangent, options.sigma));
        l.edge_offset.push_back(offset);
        offset += l.edge_spaces.back().dimension();
    }
    l.num_dofs = offset;
    return l;
}

Eigen::VectorXcd interpolate_helmholtz(const PolygonalMesh& mesh, const HelmholtzLayout& layout,
                                       const std::function<Complex(const Point&)>& u) {
    Eigen::VectorXcd dofs(layout.num_dofs);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& E = mesh.edge(e);
        const EdgeTraceSpace& s = layout.edge_spaces[e];
        const QuadratureRule r = segment_rule(E.a, E.b, 24 + static_cast<int>(std::ceil(layout.k * E.length)));
        for (int a = 0; a < s.dimension(); ++a) {
            Complex v = 0.0;
            for (std::size_t t = 0; t < r.size(); ++t)
                v += r.weights[t] * u(r.points[t]) *
                     std::conj(edge_basis_value(s, layout.k, layout.directions, E.midpoint, a, r.points[t]));
            dofs(layout.edge_offset[e] + a) = v / E.length;
        }
    }
    return dofs;
}

Eigen::VectorXcd local_helmholtz_dofs(const PolygonalMesh& mesh, const HelmholtzLayout& layout, std::size_t element,
                                      const Eigen::VectorXcd& global) {
    const auto& edges = mesh.element_edges(element);
    int n = 0;
    for (int e : edges) n += layout.edge_spaces[e].dimension();
    Eigen::VectorXcd local(n);
    int pos = 0;
    for (int e : edges) {
        const int d = layout.edge_spaces[e].dimension();
        local.segment(pos, d) = global.segment(layout.edge_offset[e], d);
        pos += d;
    }
    return local;
}

ImpedanceData impedance_data(const ComplexField& u, double k) {
    return [u, k](const Point& x, const Point& n) {
        const CVector2 g = u.gradient(x);
        return I_unit * k * u.value(x) + n.x() * g.x() + n.y() * g.y();
    };
}

EdgeProjector edge_projector(const EdgeTraceSpace& s, const Edge& E, const std::vector<Point>& dirs,
                             const HelmholtzOptions& options) {
    EdgeProjector ep;
    if (options.edge_target == EdgeProjectorTarget::TraceSpace) {
        ep.T = E.length * Eigen::MatrixXcd::Identity(s.dimension(), s.dimension());
        ep.mu = s.lambda;
        ep.F = s.Q;
        return ep;
    }
    // Boundary edges have elements[0] inside the domain, so E.normal is the outward normal.
    std::vector<int> sel;
    for (int r = 0; r < static_cast<int>(dirs.size()); ++r)
        if (std::abs(1.0 + dirs[r].dot(E.normal)) > 1e-12) sel.push_back(r);
    Eigen::MatrixXcd H(sel.size(), sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i)
        for (std::size_t j = 0; j < sel.size(); ++j) H(i, j) = s.gram(sel[i], sel[j]);
    const EdgeTraceSpace sub = ortho_filter(H, options.sigma);
    Eigen::MatrixXcd Qsel(sel.size(), s.dimension());
    ep.F = Eigen::MatrixXcd::Zero(dirs.size(), sub.dimension());
    for (std::size_t i = 0; i < sel.size(); ++i) {
        Qsel.row(i) = s.Q.row(sel[i]);
        ep.F.row(sel[i]) = sub.Q.row(i);
    }
    ep.T = E.length * sub.Q.adjoint() * Qsel;
    ep.mu = sub.lambda;
    return ep;
}

namespace {

double min_singular_value(const Eigen::SparseMatrix<Complex>& A) {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(A);
    Eigen::SparseMatrix<Complex> Ah = A.adjoint();
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> luh(Ah);
    if (lu.info() != Eigen::Success || luh.info() != Eigen::Success) return 0.0;
    Eigen::VectorXcd x = Eigen::VectorXcd::Ones(A.rows()).normalized();
    double est = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd y = luh.solve(lu.solve(x));
        const double nrm = y.norm();
        if (!(nrm > 0.0)) return 0.0;
        const double next = 1.0 / std::sqrt(nrm);
        x = y / nrm;
        if (it > 2 && std::abs(next - est) <= 1e-10 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

}  // namespace

HelmholtzSolution solve_helmholtz(const PolygonalMesh& mesh, double k, const ImpedanceData& g,
                                  const HelmholtzOptions& options, bool compute_min_singular_value) {
    HelmholtzSolution sol;
    sol.layout = helmholtz_layout(mesh, k, options);
    const HelmholtzLayout& L = sol.layout;
    std::vector<Eigen::Triplet<Complex>> trip;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(L.num_dofs);

    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& edges = mesh.element_edges(e);
        std::vector<const EdgeTraceSpace*> spaces;
        std::vector<int> gi;
        for (int id : edges) {
            spaces.push_back(&L.edge_spaces[id]);
            for (int a = 0; a < L.edge_spaces[id].dimension(); ++a) gi.push_back(L.edge_offset[id] + a);
        }
        HelmholtzElementOperators ops = helmholtz_element_operators(mesh.element(e), k, spaces, options);
        sol.max_stiffness_condition = std::max(sol.max_stiffness_condition, ops.stiffness_condition);
        for (std::size_t i = 0; i < gi.size(); ++i)
            for (std::size_t j = 0; j < gi.size(); ++j)
                trip.emplace_back(gi[i], gi[j], ops.local_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        sol.projectors.push_back(std::move(ops.projector));
        sol.bases.push_back(std::move(ops.basis));
    }

    for (int id : mesh.boundary_edges()) {
        const Edge& E = mesh.edge(id);
        const EdgeTraceSpace& s = L.edge_spaces[id];
        const EdgeProjector ep = edge_projector(s, E, L.directions, options);
        const Eigen::MatrixXcd b = (I_unit * k) * ep.T.adjoint() * ep.mu.cwiseInverse().asDiagonal() * ep.T;
        for (int i = 0; i < s.dimension(); ++i)
            for (int j = 0; j < s.dimension(); ++j) trip.emplace_back(L.edge_offset[id] + i, L.edge_offset[id] + j, b(i, j));
        // (g, f_b) by quadrature
        const QuadratureRule r = segment_rule(E.a, E.b, 30 + static_cast<int>(std::ceil(k * E.length)));
        Eigen::VectorXcd gf = Eigen::VectorXcd::Zero(ep.mu.size());
        for (std::size_t t = 0; t < r.size(); ++t) {
            const Complex gv = g(r.points[t], E.normal);
            Eigen::VectorXcd w(L.directions.size());
            for (std::size_t m = 0; m < L.directions.size(); ++m)
                w(m) = std::exp(I_unit * (k * L.directions[m].dot(r.points[t] - E.midpoint)));
            gf += (r.weights[t] * gv) * (ep.F.adjoint() * w).conjugate();
        }
        rhs.segment(L.edge_offset[id], s.dimension()) += ep.T.adjoint() * ep.mu.cwiseInverse().asDiagonal() * gf;
    }

    Eigen::SparseMatrix<Complex> A(L.num_dofs, L.num_dofs);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw SingularSystem("Helmholtz system factorisation failed: " + lu.lastErrorMessage());
    sol.dofs = lu.solve(rhs);
    if (!sol.dofs.allFinite()) throw SingularSystem("Helmholtz solve produced non-finite values");
    if (compute_min_singular_value) sol.min_singular_value = min_singular_value(A);
    return sol;
}

double helmholtz_projected_error(const PolygonalMesh& mesh, const HelmholtzSolution& uh, const ComplexField& u) {
    const double k = uh.layout.k;
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Polygon& K = mesh.element(e);
        const Eigen::VectorXcd c = uh.projectors[e] * local_helmholtz_dofs(mesh, uh.layout, e, uh.dofs);
        const PlaneWaveBasis& basis = uh.bases[e];
        const QuadratureRule r = polygon_rule(K, 12 + static_cast<int>(std::ceil(k * K.diameter())));
        for (std::size_t t = 0; t < r.size(); ++t) {
            Complex v = u.value(r.points[t]);
            CVector2 g = u.gradient(r.points[t]);
            for (int m = 0; m < basis.size(); ++m) {
                v -= c(m) * basis.value(m, r.points[t]);
                g -= c(m) * basis.gradient(m, r.points[t]);
            }
            total += r.weights[t] * (g.squaredNorm() + k * k * std::norm(v));
        }
    }
    return std::sqrt(total);
}

double helmholtz_weighted_norm(const PolygonalMesh& mesh, const ComplexField& u, double k) {
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e)
        total += weighted_norm_squared(u, k, mesh.element(e), 12 + static_cast<int>(std::ceil(k * mesh.element(e).diameter())));
    return std::sqrt(total);
}

StabilitySamples sample_helmholtz_stability(
    const HelmholtzElementOperators& ops, double k,
    const std::function<std::pair<double, double>(const Eigen::VectorXcd&)>& norms, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const int n = ops.num_dofs();
    const Eigen::MatrixXcd R = Eigen::MatrixXcd::Identity(n, n) - ops.dof_of_basis * ops.projector;
    StabilitySamples out{-std::numeric_limits<double>::infinity(), 0.0};
    std::vector<Eigen::VectorXcd> vs;
    std::vector<double> wn;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXcd u(n);
        for (int i = 0; i < n; ++i) u(i) = Complex(normal(rng), normal(rng));
        const Eigen::VectorXcd v = R * u;
        const auto [semi, l2] = norms(v);
        if (!(l2 > 0.0)) continue;
        const double svv = std::real(v.dot(ops.stabilization * v));
        out.coercivity_defect = std::max(out.coercivity_defect, (semi - svv) / (k * k * l2) - 1.0);
        vs.push_back(v);
        wn.push_back(std::sqrt(semi + k * k * l2));
    }
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j)
            out.continuity = std::max(out.continuity, std::abs(vs[j].dot(ops.stabilization * vs[i])) / (wn[i] * wn[j]));
    return out;
}

}  // namespace tvem
