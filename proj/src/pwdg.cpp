#include "tvem/pwdg.hpp"

namespace tvem {

PwdgEdgeParts pwdg_edge_parts(const Point& a, const Point& b, const Point& normal, double k,
                              const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                              const PwdgFluxes& fluxes) {
    if (!(fluxes.alpha > 0.0) || !(fluxes.beta > 0.0)) throw InvalidArgument("PWDG flux parameters must be positive");
    const int p = static_cast<int>(directions.size());
    const Point xe = 0.5 * (a + b);
    PwdgEdgeParts out;
    for (int sb = 0; sb < 2; ++sb)
        for (int sa = 0; sa < 2; ++sa) {
            Eigen::MatrixXcd cons(p, p), pen(p, p);
            const double s_a = sides[sa].sign;
            const double s_b = sides[sb].sign;
            for (int l = 0; l < p; ++l)
                for (int m = 0; m < p; ++m) {
                    const Point& dm = directions[m];
                    const Point& dl = directions[l];
                    const Complex phase = std::exp(I_unit * (k * (dm.dot(xe - sides[sa].center) - dl.dot(xe - sides[sb].center))));
                    const Complex I = phase * segment_exp_integral(k * (dm - dl), a - xe, b - xe);
                    const double dmn = dm.dot(normal);
                    const double dln = dl.dot(normal);
                    cons(l, m) = (0.5 * I_unit * k) * (s_a * dln - s_b * dmn) * I;
                    pen(l, m) = I_unit * k * s_a * s_b * (fluxes.beta * dmn * dln + fluxes.alpha) * I;
                }
            out.consistency[sb][sa] = std::move(cons);
            out.penalty[sb][sa] = std::move(pen);
        }
    return out;
}

PwdgEdgeBlocks pwdg_edge_blocks(const Point& a, const Point& b, const Point& normal, double k,
                                const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                                const PwdgFluxes& fluxes) {
    PwdgEdgeParts parts = pwdg_edge_parts(a, b, normal, k, directions, sides, fluxes);
    PwdgEdgeBlocks out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = parts.consistency[i][j] + parts.penalty[i][j];
    return out;
}

Eigen::MatrixXcd pwdg_volume_block(const Polygon& K, double k, const std::vector<Point>& directions) {
    const PlaneWaveElementMatrices m = plane_wave_element_matrices(PlaneWaveBasis(k, directions, K.barycenter()), K);
    return m.grad - k * k * m.mass;
}

Complex jump_average_terms(const Point& a, const Point& b, const Point& normal, double k,
                           const std::vector<Point>& directions, const std::array<PwdgSide, 2>& sides,
                           const PwdgFluxes& fluxes, const std::array<Eigen::VectorXcd, 2>& u,
                           const std::array<Eigen::VectorXcd, 2>& v) {
    const PwdgEdgeBlocks E = pwdg_edge_blocks(a, b, normal, k, directions, sides, fluxes);
    Complex s = 0.0;
    for (int sb = 0; sb < 2; ++sb)
        for (int sa = 0; sa < 2; ++sa) s += v[sb].dot(E[sb][sa] * u[sa]);
    return s;
}

Eigen::SparseMatrix<Complex> assemble_pwdg(const PolygonalMesh& mesh, double k, int q, const PwdgFluxes& fluxes) {
    const auto dirs = equispaced_directions(2 * q + 1);
    const int p = static_cast<int>(dirs.size());
    const Eigen::Index n = static_cast<Eigen::Index>(mesh.num_elements()) * p;
    std::vector<Eigen::Triplet<Complex>> trip;
    auto add = [&](int bi, int ai, const Eigen::MatrixXcd& blk) {
        for (int l = 0; l < p; ++l)
            for (int m = 0; m < p; ++m) trip.emplace_back(bi * p + l, ai * p + m, blk(l, m));
    };
    for (std::size_t K = 0; K < mesh.num_elements(); ++K)
        add(static_cast<int>(K), static_cast<int>(K), pwdg_volume_block(mesh.element(K), k, dirs));
    for (const Edge& e : mesh.edges()) {
        if (e.is_boundary()) continue;
        const std::array<PwdgSide, 2> sides{PwdgSide{mesh.element(e.elements[0]).barycenter(), 1},
                                            PwdgSide{mesh.element(e.elements[1]).barycenter(), -1}};
        const PwdgEdgeBlocks E = pwdg_edge_blocks(e.a, e.b, e.normal, k, dirs, sides, fluxes);
        for (int sb = 0; sb < 2; ++sb)
            for (int sa = 0; sa < 2; ++sa) add(e.elements[sb], e.elements[sa], E[sb][sa]);
    }
    Eigen::SparseMatrix<Complex> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

}  // namespace tvem
