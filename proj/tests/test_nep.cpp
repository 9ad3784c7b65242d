#include "oracles.hpp"

#include "tvem/nep.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace tvem;

namespace {

NepFunction linear_diagonal(std::vector<Complex> roots) {
    const int n = static_cast<int>(roots.size());
    return {n,
            [roots](Complex z) {
                Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(roots.size()), static_cast<Eigen::Index>(roots.size()));
                for (std::size_t i = 0; i < roots.size(); ++i) T(i, i) = z - roots[i];
                return T;
            },
            {}};
}

std::vector<Complex> companion(const Eigen::MatrixXcd& A0, const Eigen::MatrixXcd& A1, const Eigen::MatrixXcd& A2) {
    const Eigen::VectorXcd ev = oracle::quadratic_eigenvalues(A0, A1, A2);
    return {ev.begin(), ev.end()};
}

struct Quadratic {
    Eigen::MatrixXcd A0, A1, A2;
    NepFunction function() const {
        return {static_cast<int>(A0.rows()), [this](Complex z) { return Eigen::MatrixXcd(A0 + z * A1 + z * z * A2); },
                [this](Complex z) { return Eigen::MatrixXcd(A1 + 2.0 * z * A2); }};
    }
};

Quadratic random_quadratic(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    auto mat = [&] {
        Eigen::MatrixXcd M(n, n);
        for (auto& x : M.reshaped()) x = Complex(nd(rng), nd(rng));
        return M;
    };
    return {mat(), mat(), mat()};
}

// Circle around the origin whose radius keeps a clear gap to every oracle eigenvalue.
Contour separated_contour(const std::vector<Complex>& ev, int points) {
    std::vector<double> r;
    for (Complex z : ev) r.push_back(std::abs(z));
    std::sort(r.begin(), r.end());
    double best_gap = 0.0, radius = 1.0;
    for (std::size_t i = 0; i + 1 < r.size() && i < 8; ++i) {
        const double gap = (r[i + 1] - r[i]) / r[i + 1];
        if (gap > best_gap) {
            best_gap = gap;
            radius = 0.5 * (r[i] + r[i + 1]);
        }
    }
    return {0.0, radius, points};
}

std::vector<Complex> sorted_values(const NepResult& res) {
    std::vector<Complex> v;
    for (const auto& p : res.accepted) v.push_back(p.value);
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    return v;
}

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (Complex x : a) {
        double d = std::numeric_limits<double>::infinity();
        for (Complex y : b) d = std::min(d, std::abs(x - y));
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace

TEST_CASE("linear examples") {
    const auto r1 = solve_nep(linear_diagonal({0.7, 0.7}), Contour{0.7, 0.3, 64});
    REQUIRE(r1.accepted.size() == 2);
    for (const auto& p : r1.accepted) CHECK(std::abs(p.value - 0.7) < 1e-12);

    const auto r2 = sorted_values(solve_nep(linear_diagonal({1.0, 2.0}), Contour{1.5, 1.0, 64}));
    REQUIRE(r2.size() == 2);
    CHECK(std::abs(r2[0] - 1.0) < 1e-12);
    CHECK(std::abs(r2[1] - 2.0) < 1e-12);
}

TEST_CASE("random quadratic problems against the companion linearization") {
    std::mt19937_64 rng(2024);
    int compared = 0;
    for (int t = 0; t < 50; ++t) {
        const Quadratic Q = random_quadratic(rng, 6);
        const std::vector<Complex> all = companion(Q.A0, Q.A1, Q.A2);
        const Contour c = separated_contour(all, 64);
        std::vector<Complex> inside;
        for (Complex z : all)
            if (std::abs(z - c.center) < c.radius) inside.push_back(z);
        const NepResult res = solve_nep(Q.function(), c);
        INFO("trial " << t << " radius " << c.radius << " inside " << inside.size());
        CHECK(set_distance(sorted_values(res), inside) < 1e-9);
        CHECK(set_distance(inside, sorted_values(res)) < 1e-9);
        for (const auto& p : res.accepted) CHECK(p.residual <= 1e-8);
        compared += static_cast<int>(inside.size());
    }
    CHECK(compared >= 50);
}

TEST_CASE("contour refinement and probe independence") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const Quadratic Q = random_quadratic(rng, 6);
        const Contour c = separated_contour(companion(Q.A0, Q.A1, Q.A2), 64);
        const auto base = sorted_values(solve_nep(Q.function(), c));
        Contour doubled = c;
        doubled.points = 128;
        CHECK(set_distance(sorted_values(solve_nep(Q.function(), doubled)), base) <= 1e-9);
        NepOptions other;
        other.seed = 99;
        CHECK(set_distance(sorted_values(solve_nep(Q.function(), c, other)), base) <= 1e-9);
        NepOptions verified;
        verified.verify_quadrature = true;
        CHECK_NOTHROW(solve_nep(Q.function(), c, verified));
    }
}

TEST_CASE("residuals reported faithfully") {
    std::mt19937_64 rng(11);
    const Quadratic Q = random_quadratic(rng, 5);
    const NepFunction T = Q.function();
    const NepResult res = solve_nep(T, separated_contour(companion(Q.A0, Q.A1, Q.A2), 64));
    REQUIRE(!res.accepted.empty());
    for (const auto& p : res.accepted) {
        const Eigen::MatrixXcd M = T.eval(p.value);
        const double direct = (M * p.vector).norm() / (M.norm() * p.vector.norm());
        CHECK(p.residual == doctest::Approx(direct).epsilon(1e-6));
        CHECK(nep_residual(T, p.value, p.vector) == doctest::Approx(direct).epsilon(1e-6));
        CHECK(p.residual <= 1e-8);
    }
}

TEST_CASE("rank collapse and argument checks") {
    CHECK_THROWS_AS(solve_nep(linear_diagonal({5.0, 6.0}), Contour{0.0, 1.0, 64}), NepFailure);
    CHECK_THROWS_AS(solve_nep(linear_diagonal({0.5}), Contour{0.0, 1.0, 8}), InvalidArgument);
    CHECK_THROWS_AS(solve_nep(linear_diagonal({0.5}), Contour{0.0, -1.0, 64}), InvalidArgument);
}

TEST_CASE("discrete wavenumber selection") {
    const double k = 3.0;
    const std::vector<Complex> a{k, k + 0.1};
    CHECK(select_discrete_wavenumber(a, k) == Complex(k));
    const std::vector<Complex> b{Complex(k, 0.1), k - 0.2};
    CHECK(select_discrete_wavenumber(b, k) == Complex(k, 0.1));
    const std::vector<Complex> c{Complex(2.5, 0.3)};
    CHECK(select_discrete_wavenumber(c, k) == Complex(2.5, 0.3));
    const std::vector<Complex> tie{k - 0.1, k + 0.1};
    CHECK(select_discrete_wavenumber(tie, k) == Complex(k + 0.1));
    const std::vector<Complex> negative{Complex(-3.0, 0.0), Complex(-0.1, 1.0)};
    CHECK_THROWS_AS(select_discrete_wavenumber(negative, k), NepFailure);
    CHECK_THROWS_AS(select_discrete_wavenumber(std::span<const Complex>(), k), NepFailure);
}
