#include "oracles.hpp"
#include "properties.hpp"

#include "tvem/pwdg.hpp"

#include <doctest.h>

#include <random>

using namespace tvem;

namespace {

Complex wave(double k, const Point& d, const Point& c, const Point& x) { return std::exp(I_unit * k * d.dot(x - c)); }

struct Side {
    Complex u;
    CVector2 grad;
};

Side evaluate(double k, const std::vector<Point>& dirs, const PwdgSide& s, const Eigen::VectorXcd& c, const Point& x) {
    Side out{0.0, CVector2::Zero()};
    for (std::size_t m = 0; m < dirs.size(); ++m) {
        const Complex w = c(m) * wave(k, dirs[m], s.center, x);
        out.u += w;
        out.grad += I_unit * k * w * dirs[m].cast<Complex>();
    }
    return out;
}

// The four edge integrals of the form, evaluated pointwise by Gauss quadrature.
Complex edge_oracle(const Point& a, const Point& b, const Point& n, double k, const std::vector<Point>& dirs,
                    const std::array<PwdgSide, 2>& sides, const PwdgFluxes& f, const std::array<Eigen::VectorXcd, 2>& u,
                    const std::array<Eigen::VectorXcd, 2>& v) {
    return oracle::integrate_segment(
        [&](const Point& x) {
            std::array<Side, 2> U, V;
            std::array<CVector2, 2> normal;
            for (int s = 0; s < 2; ++s) {
                U[s] = evaluate(k, dirs, sides[s], u[s], x);
                V[s] = evaluate(k, dirs, sides[s], v[s], x);
                normal[s] = (sides[s].sign * n).cast<Complex>();
            }
            const CVector2 ju = U[0].u * normal[0] + U[1].u * normal[1];
            const CVector2 jv = V[0].u * normal[0] + V[1].u * normal[1];
            const CVector2 au = 0.5 * (U[0].grad + U[1].grad);
            const CVector2 av = 0.5 * (V[0].grad + V[1].grad);
            const Complex jnu = U[0].grad.cwiseProduct(normal[0]).sum() + U[1].grad.cwiseProduct(normal[1]).sum();
            const Complex jnv = V[0].grad.cwiseProduct(normal[0]).sum() + V[1].grad.cwiseProduct(normal[1]).sum();
            auto dotc = [](const CVector2& x, const CVector2& y) { return x(0) * std::conj(y(0)) + x(1) * std::conj(y(1)); };
            return -dotc(ju, av) - f.beta / (I_unit * k) * jnu * std::conj(jnv) - dotc(au, jv) +
                   I_unit * k * f.alpha * dotc(ju, jv);
        },
        a, b, 40);
}

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(n);
    for (auto& x : v) x = Complex(nd(rng), nd(rng));
    return v;
}

const Point A(0.2, 0.1), B(0.5, 0.6);
const Point N = Point(B.y() - A.y(), A.x() - B.x()).normalized();
const std::array<PwdgSide, 2> SIDES{PwdgSide{Point(0.55, 0.2), 1}, PwdgSide{Point(0.1, 0.5), -1}};

}  // namespace

TEST_CASE("volume block") {
    const Polygon K({{0, 0}, {0.5, 0.05}, {0.45, 0.4}, {0.1, 0.5}});
    const double k = 6.0;
    const auto dirs = equispaced_directions(7);
    const Eigen::MatrixXcd V = pwdg_volume_block(K, k, dirs);
    for (int l = 0; l < 7; ++l) CHECK(std::abs(V(l, l)) < 1e-12 * k * k * K.area());
    const Point c = K.barycenter();
    for (int l = 0; l < 7; ++l)
        for (int m = 0; m < 7; ++m) {
            const Complex ref = oracle::integrate_polygon(
                [&](const Point& x) {
                    const Complex wm = wave(k, dirs[m], c, x), wl = wave(k, dirs[l], c, x);
                    return (k * k * dirs[m].dot(dirs[l]) - k * k) * wm * std::conj(wl);
                },
                K.vertices(), 30);
            CHECK(std::abs(V(l, m) - ref) < 1e-10 * k * k * K.area());
        }
}

TEST_CASE("edge terms against quadrature") {
    std::mt19937_64 rng(3);
    for (double k : {1.0, 7.0, 20.0}) {
        const auto dirs = equispaced_directions(9);
        for (const PwdgFluxes f : {PwdgFluxes{}, PwdgFluxes{0.3, 2.0}}) {
            for (int t = 0; t < 5; ++t) {
                const std::array<Eigen::VectorXcd, 2> u{random_vector(rng, 9), random_vector(rng, 9)};
                const std::array<Eigen::VectorXcd, 2> v{random_vector(rng, 9), random_vector(rng, 9)};
                const Complex got = jump_average_terms(A, B, N, k, dirs, SIDES, f, u, v);
                const Complex ref = edge_oracle(A, B, N, k, dirs, SIDES, f, u, v);
                CHECK(std::abs(got - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
                // swapping the two sides leaves the value unchanged
                const std::array<PwdgSide, 2> swapped{SIDES[1], SIDES[0]};
                CHECK(std::abs(jump_average_terms(A, B, N, k, dirs, swapped, f, {u[1], u[0]}, {v[1], v[0]}) - got) <
                      1e-12 * std::abs(got));
                // so does reversing the reference normal
                const std::array<PwdgSide, 2> flipped{PwdgSide{SIDES[0].center, -1}, PwdgSide{SIDES[1].center, 1}};
                CHECK(std::abs(jump_average_terms(B, A, -N, k, dirs, flipped, f, u, v) - got) < 1e-12 * std::abs(got));
            }
        }
    }
}

TEST_CASE("continuous fields have no edge contribution") {
    const double k = 5.0;
    const auto dirs = equispaced_directions(7);
    std::mt19937_64 rng(8);
    // continuous fields: the same global plane-wave combination expressed in each element-centred basis
    auto local = [&](const Eigen::VectorXcd& g, const Point& c) {
        Eigen::VectorXcd out(g.size());
        for (int m = 0; m < g.size(); ++m) out(m) = g(m) * std::exp(I_unit * k * dirs[m].dot(c));
        return out;
    };
    const Eigen::VectorXcd g = random_vector(rng, 7), h = random_vector(rng, 7);
    const std::array<Eigen::VectorXcd, 2> u{local(g, SIDES[0].center), local(g, SIDES[1].center)};
    const std::array<Eigen::VectorXcd, 2> v{local(h, SIDES[0].center), local(h, SIDES[1].center)};
    CHECK(std::abs(jump_average_terms(A, B, N, k, dirs, SIDES, {}, u, v)) < 1e-12 * g.norm() * h.norm());

    // globally: a_n reduces to the sum of volume terms
    const PolygonalMesh m = lattice_mesh(LatticeKind::Triangle, 3, 0.3);
    const Eigen::MatrixXcd D(assemble_pwdg(m, k, 3, {}));
    Eigen::VectorXcd U(D.cols()), W(D.cols());
    Eigen::MatrixXcd blockdiag = Eigen::MatrixXcd::Zero(D.rows(), D.cols());
    for (std::size_t K = 0; K < m.num_elements(); ++K) {
        const Point c = m.element(K).barycenter();
        U.segment(K * 7, 7) = local(g, c);
        W.segment(K * 7, 7) = local(h, c);
        blockdiag.block(K * 7, K * 7, 7, 7) = pwdg_volume_block(m.element(K), k, dirs);
    }
    CHECK(std::abs(W.dot(D * U) - W.dot(blockdiag * U)) < 1e-12 * D.norm() * U.norm() * W.norm());
}

TEST_CASE("Hermitian structure and dissipativity") {
    const PolygonalMesh m = lattice_mesh(LatticeKind::Hexagon, 3, 0.4);
    const double k = 4.0;
    const auto dirs = equispaced_directions(7);
    const int p = 7;
    const Eigen::Index n = static_cast<Eigen::Index>(m.num_elements()) * p;
    Eigen::MatrixXcd cons = Eigen::MatrixXcd::Zero(n, n), pen = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t K = 0; K < m.num_elements(); ++K)
        cons.block(K * p, K * p, p, p) = pwdg_volume_block(m.element(K), k, dirs);
    for (const Edge& e : m.edges()) {
        if (e.is_boundary()) continue;
        const std::array<PwdgSide, 2> sides{PwdgSide{m.element(e.elements[0]).barycenter(), 1},
                                            PwdgSide{m.element(e.elements[1]).barycenter(), -1}};
        const PwdgEdgeParts parts = pwdg_edge_parts(e.a, e.b, e.normal, k, dirs, sides, {});
        for (int sb = 0; sb < 2; ++sb)
            for (int sa = 0; sa < 2; ++sa) {
                cons.block(e.elements[sb] * p, e.elements[sa] * p, p, p) += parts.consistency[sb][sa];
                pen.block(e.elements[sb] * p, e.elements[sa] * p, p, p) += parts.penalty[sb][sa];
            }
    }
    // the alpha and beta integrals are Hermitian forms, scaled by ik
    const Eigen::MatrixXcd P = pen / (I_unit * k);
    CHECK(props::hermitian_defect(P) < 1e-12);
    CHECK(props::psd_defect(P) < 1e-12);
    CHECK(props::hermitian_defect(cons) < 1e-12);
    const Eigen::MatrixXcd full(assemble_pwdg(m, k, 3, {}));
    CHECK((full - cons - pen).norm() < 1e-12 * full.norm());
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXcd u = random_vector(rng, static_cast<int>(n));
        CHECK(u.dot(full * u).imag() >= -1e-12 * full.norm() * u.squaredNorm());
    }
}

TEST_CASE("flux parameters must be positive") {
    const auto dirs = equispaced_directions(3);
    CHECK_THROWS_AS(pwdg_edge_blocks(A, B, N, 1.0, dirs, SIDES, PwdgFluxes{0.0, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(pwdg_edge_blocks(A, B, N, 1.0, dirs, SIDES, PwdgFluxes{0.5, -1.0}), InvalidArgument);
}
