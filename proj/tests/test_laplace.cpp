#include "oracles.hpp"
#include "properties.hpp"

#include "tvem/laplace.hpp"

#include <doctest.h>

#include <cmath>

using namespace tvem;

namespace {

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

const RealField saddle{[](const Point& x) { return x.x() * x.x() - x.y() * x.y(); },
                       [](const Point& x) { return Eigen::Vector2d(2 * x.x(), -2 * x.y()); }};

const RealField exp_cos{[](const Point& x) { return std::exp(x.x()) * std::cos(x.y()); },
                        [](const Point& x) {
                            return Eigen::Vector2d(std::exp(x.x()) * std::cos(x.y()), -std::exp(x.x()) * std::sin(x.y()));
                        }};

const RealField quartic{[](const Point& x) { return std::real(std::pow(Complex(x.x(), x.y()), 4)); },
                        [](const Point& x) {
                            const Complex d = 4.0 * std::pow(Complex(x.x(), x.y()), 3);
                            return Eigen::Vector2d(d.real(), -d.imag());
                        }};

}  // namespace

TEST_CASE("DOF counts and DOF matrix rank") {
    const Polygon T({{0, 0}, {1, 0}, {0, 1}});
    CHECK(laplace_element_operators(T, {1}).num_dofs() == 3);
    const auto ops = laplace_element_operators(unit_square(), {2});
    CHECK(ops.num_dofs() == 8);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ops.dof_of_basis);
    CHECK(svd.rank() == 5);
    CHECK_THROWS_AS(laplace_element_operators(T, {0}), InvalidArgument);
}

TEST_CASE("projector identities") {
    for (int p = 1; p <= 4; ++p) {
        const auto ops = laplace_element_operators(unit_square().translated(Point(0.3, 0.2)), {p});
        CHECK(props::laplace_range_defect(ops) < 1e-11);
        CHECK((ops.projector * Eigen::VectorXd::Zero(ops.num_dofs())).norm() == 0.0);
        CHECK(props::laplace_residual_defect(unit_square().translated(Point(0.3, 0.2)), ops, 10, 3u + p) < 1e-11);
    }
}

TEST_CASE("stabilization") {
    for (auto kind : {LaplaceStabilization::Identity, LaplaceStabilization::DiagonalRecipe}) {
        const Polygon K = Polygon({{0, 0}, {1, 0}, {1.3, 0.8}, {0.4, 1.2}, {-0.2, 0.6}});
        const auto ops = laplace_element_operators(K, {3, kind});
        const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(ops.num_dofs(), ops.num_dofs()) -
                                  ops.dof_of_basis * ops.projector;
        CHECK((R * ops.dof_of_basis).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(props::hermitian_defect(ops.stabilization.cast<Complex>()) < 1e-15);
        CHECK(props::psd_defect(ops.stabilization.cast<Complex>()) < 1e-12);
        CHECK(props::hermitian_defect(ops.local_matrix.cast<Complex>()) < 1e-13);
        CHECK(props::psd_defect(ops.local_matrix.cast<Complex>()) < 1e-12);
        // the kernel of the local matrix is the constants
        Eigen::VectorXd one = Eigen::VectorXd::Zero(ops.num_dofs());
        for (std::size_t e = 0; e < K.size(); ++e) one(e * 3) = 1.0;
        CHECK((ops.local_matrix * one).norm() < 1e-12 * ops.local_matrix.norm());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.local_matrix);
        CHECK(es.eigenvalues()(1) > 1e-8 * es.eigenvalues().maxCoeff());
    }
}

TEST_CASE("sampled stability constants are h-independent") {
    std::vector<StabilityEstimate> est;
    for (double h : {1.0, 0.5, 0.25}) {
        const Polygon K = unit_square().scaled(h);
        const auto ops = laplace_element_operators(K, {1});
        const oracle::LaplaceVirtual virt(K, 1, 16);
        est.push_back(estimate_laplace_stability(
            ops, [&](const Eigen::VectorXd& v) { return virt.seminorm_squared(v); }, 200, 42));
    }
    for (const auto& e : est) {
        CHECK(e.lower > 0.0);
        CHECK(std::isfinite(e.upper));
        CHECK(e.upper >= e.lower);
        CHECK(e.lower <= 2.0 * est[0].lower);
        CHECK(e.lower >= 0.5 * est[0].lower);
        CHECK(e.upper <= 2.0 * est[0].upper);
        CHECK(e.upper >= 0.5 * est[0].upper);
    }
}

TEST_CASE("property suite") {
    for (const auto& c : props::laplace_suite(77)) {
        INFO(c.name << " = " << c.value << " (limit " << c.limit << ")");
        CHECK(c.pass);
    }
}

TEST_CASE("patch test on all lattices") {
    for (auto kind : {LatticeKind::Square, LatticeKind::Triangle, LatticeKind::Hexagon}) {
        const PolygonalMesh m = lattice_mesh(kind, 4, 0.25);
        for (auto stab : {LaplaceStabilization::Identity, LaplaceStabilization::DiagonalRecipe}) {
            const auto sol = solve_laplace(m, saddle.value, {2, stab});
            CHECK(laplace_projected_error(m, sol, saddle) < 1e-10);
        }
    }
}

TEST_CASE("zero data gives the zero solution") {
    const PolygonalMesh m = lattice_mesh(LatticeKind::Hexagon, 3, 0.3);
    const auto sol = solve_laplace(m, [](const Point&) { return 0.0; }, {2});
    CHECK(sol.dofs.norm() == 0.0);
}

TEST_CASE("convergence rate for a quartic harmonic solution") {
    std::vector<double> hs, errs;
    for (int n : {4, 8, 16, 32}) {
        const PolygonalMesh m = unit_square_mesh(n);
        const auto sol = solve_laplace(m, quartic.value, {2});
        hs.push_back(1.0 / n);
        errs.push_back(laplace_projected_error(m, sol, quartic));
    }
    const double rate = std::log(errs[2] / errs[3]) / std::log(2.0);
    CHECK(rate == doctest::Approx(2.0).epsilon(0.1));
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
}

TEST_CASE("interpolation") {
    const PolygonalMesh m = unit_square_mesh(3);
    const Eigen::VectorXd zero = interpolate_laplace(m, 2, [](const Point&) { return 0.0; });
    CHECK(zero.norm() == 0.0);
    const auto proj = project_laplace(m, interpolate_laplace(m, 2, saddle.value), {2});
    CHECK(laplace_projected_error(m, proj, saddle) < 1e-11);

    for (int n : {4, 8}) {
        const PolygonalMesh mn = unit_square_mesh(n);
        const auto pi = project_laplace(mn, interpolate_laplace(mn, 2, exp_cos.value), {2});
        CHECK(laplace_projected_error(mn, pi, exp_cos) <= 1.5 * best_approx_error_harmonic(exp_cos, 2, mn));
    }
}

TEST_CASE("nonconformity measure") {
    const PolygonalMesh m = lattice_mesh(LatticeKind::Triangle, 3, 0.3);
    // continuous data: the interpolant of a global harmonic polynomial has no jumps
    const auto cont = project_laplace(m, interpolate_laplace(m, 2, saddle.value), {2});
    CHECK(std::abs(nonconformity_measure(exp_cos, m, cont, false)) < 1e-11);

    // flux of degree p-1 on every edge: annihilated by the weak continuity constraint
    Eigen::VectorXd random = Eigen::VectorXd::Random(static_cast<Eigen::Index>(m.num_edges()) * 2);
    const auto rv = project_laplace(m, random, {2});
    CHECK(std::abs(nonconformity_measure(saddle, m, rv)) < 1e-11);

    // decays under refinement for the discrete solution of a smooth problem
    double last = 1e300;
    for (int n : {4, 8, 16}) {
        const PolygonalMesh mn = unit_square_mesh(n);
        const auto sol = solve_laplace(mn, exp_cos.value, {1});
        const double nc = std::abs(nonconformity_measure(exp_cos, mn, sol, false));
        CHECK(nc < last);
        last = nc;
    }
}
