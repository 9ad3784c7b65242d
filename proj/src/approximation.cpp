#include "tvem/approximation.hpp"

#include "tvem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tvem {

HarmonicPolyBasis::HarmonicPolyBasis(int degree, Point center, double scale) : degree_(degree) {
    if (degree < 1) throw InvalidArgument("harmonic basis degree must be >= 1");
    members_.emplace_back(degree, center, scale);
    members_.back().coeff(0, 0) = 1.0;
    for (int m = 1; m <= degree; ++m) {
        Poly2 re(degree, center, scale);
        Poly2 im(degree, center, scale);
        // z^m = sum_j C(m,j) x^{m-j} (i y)^j
        double binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            if (j > 0) binom = binom * (m - j + 1) / j;
            const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
            if (j % 2 == 0)
                re.coeff(m - j, j) = sign * binom;
            else
                im.coeff(m - j, j) = sign * binom;
        }
        members_.push_back(std::move(re));
        members_.push_back(std::move(im));
    }
}

std::vector<Point> equispaced_directions(int count) {
    if (count < 1) throw InvalidArgument("need at least one direction");
    std::vector<Point> d(count);
    for (int l = 0; l < count; ++l) {
        const double a = 2.0 * pi * l / count;
        d[l] = Point(std::cos(a), std::sin(a));
    }
    return d;
}

double direction_separation(const std::vector<Point>& directions) {
    const std::size_t n = directions.size();
    if (n < 2) return 1.0;
    double best = 2.0 * pi;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = std::clamp(directions[i].dot(directions[j]), -1.0, 1.0);
            const double s = directions[i].x() * directions[j].y() - directions[i].y() * directions[j].x();
            best = std::min(best, std::abs(std::atan2(s, c)));
        }
    return best / (2.0 * pi / n);
}

PlaneWaveBasis::PlaneWaveBasis(double k, int q, Point center)
    : PlaneWaveBasis(k, equispaced_directions(2 * q + 1), std::move(center)) {
    if (q < 1) throw InvalidArgument("plane-wave parameter q must be >= 1");
}

PlaneWaveBasis::PlaneWaveBasis(double k, std::vector<Point> directions, Point center)
    : k_(k), directions_(std::move(directions)), center_(std::move(center)) {
    if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
    if (direction_separation(directions_) <= 0.0) throw InvalidArgument("plane-wave directions must be distinct");
}

Complex PlaneWaveBasis::value(int l, const Point& x) const {
    return std::exp(I_unit * (k_ * directions_[l].dot(x - center_)));
}

CVector2 PlaneWaveBasis::gradient(int l, const Point& x) const {
    return (I_unit * k_ * value(l, x)) * directions_[l].cast<Complex>();
}

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace

Complex segment_exp_integral(const Eigen::Vector2d& kappa, const Point& a, const Point& b) {
    const double L = (b - a).norm();
    const Point m = 0.5 * (a + b);
    return L * std::exp(I_unit * kappa.dot(m)) * sinc(0.5 * kappa.dot(b - a));
}

Complex polygon_exp_integral(const Eigen::Vector2d& kappa, const Polygon& polygon, const Point& origin) {
    const double kn = kappa.norm();
    if (kn * polygon.diameter() < 0.5) {
        // Entire integrand with small phase variation: a rule exact to degree 26 leaves a Taylor
        // remainder below 1e-30.
        const QuadratureRule r = polygon_rule(polygon, 14);
        Complex s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            s += r.weights[i] * std::exp(I_unit * kappa.dot(r.points[i] - origin));
        return s;
    }
    // exp(i kappa.y) = div(-i kappa exp(i kappa.y) / |kappa|^2)
    Complex s = 0.0;
    for (std::size_t e = 0; e < polygon.size(); ++e) {
        const Point a = polygon.edge_start(e) - origin;
        const Point b = polygon.edge_end(e) - origin;
        s += kappa.dot(polygon.edge_normal(e)) * segment_exp_integral(kappa, a, b);
    }
    return -I_unit * s / (kn * kn);
}

PlaneWaveElementMatrices plane_wave_element_matrices(const PlaneWaveBasis& basis, const Polygon& polygon) {
    const int p = basis.size();
    const double k = basis.k();
    PlaneWaveElementMatrices out{Eigen::MatrixXcd(p, p), Eigen::MatrixXcd(p, p)};
    for (int l = 0; l < p; ++l)
        for (int m = l; m < p; ++m) {
            const Eigen::Vector2d kappa = k * (basis.direction(m) - basis.direction(l));
            const Complex v = polygon_exp_integral(kappa, polygon, basis.center());
            out.mass(l, m) = v;
            out.mass(m, l) = std::conj(v);
        }
    for (int l = 0; l < p; ++l)
        for (int m = 0; m < p; ++m) out.grad(l, m) = k * k * basis.direction(m).dot(basis.direction(l)) * out.mass(l, m);
    return out;
}

EdgeTraceSpace ortho_filter(const Eigen::MatrixXcd& gram, FilterThreshold sigma) {
    if (gram.rows() != gram.cols() || gram.rows() == 0) throw InvalidArgument("Gram matrix must be square");
    const Eigen::MatrixXcd h = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error("Gram eigendecomposition failed");
    const int n = static_cast<int>(gram.rows());
    EdgeTraceSpace s;
    s.gram = gram;
    s.all_eigenvalues = es.eigenvalues().reverse();
    const double top = s.all_eigenvalues.cwiseAbs().maxCoeff();
    s.threshold = sigma.relative ? sigma.value * top : sigma.value;
    std::vector<int> keep;
    for (int i = n - 1; i >= 0; --i)
        if (es.eigenvalues()(i) >= s.threshold && es.eigenvalues()(i) > 0.0) keep.push_back(i);
    if (keep.empty()) throw FilterCollapse("all edge trace eigenvalues fall below the filter threshold");
    s.Q.resize(n, static_cast<int>(keep.size()));
    s.lambda.resize(static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        s.Q.col(j) = es.eigenvectors().col(keep[j]);
        s.lambda(j) = es.eigenvalues()(keep[j]);
    }
    return s;
}

Eigen::MatrixXcd plane_wave_edge_gram(double k, const std::vector<Point>& directions, double length,
                                      const Point& tangent) {
    const int p = static_cast<int>(directions.size());
    Eigen::MatrixXcd g(p, p);
    for (int r = 0; r < p; ++r)
        for (int m = 0; m < p; ++m)
            g(r, m) = length * sinc(0.5 * k * length * (directions[m] - directions[r]).dot(tangent));
    return g;
}

EdgeTraceSpace plane_wave_edge_space(double k, const std::vector<Point>& directions, double length,
                                     const Point& tangent, FilterThreshold sigma) {
    return ortho_filter(plane_wave_edge_gram(k, directions, length, tangent), sigma);
}

double edge_legendre(int alpha, const Point& a, const Point& b, const Point& x) {
    const Point d = b - a;
    return legendre(alpha, 2.0 * (x - a).dot(d) / d.squaredNorm() - 1.0);
}

double best_approx_error_harmonic(const RealField& u, int p, const PolygonalMesh& mesh) {
    double total = 0.0;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const Polygon& K = mesh.element(k);
        const HarmonicPolyBasis basis(p, K.barycenter(), K.diameter());
        const QuadratureRule r = polygon_rule(K, p + 8);
        const int n = static_cast<int>(r.size());
        Eigen::MatrixXd A(2 * n, basis.size() - 1);
        Eigen::VectorXd f(2 * n);
        for (int i = 0; i < n; ++i) {
            const double sw = std::sqrt(r.weights[i]);
            const Eigen::Vector2d g = u.gradient(r.points[i]);
            f.segment<2>(2 * i) = sw * g;
            for (int j = 1; j < basis.size(); ++j) A.block<2, 1>(2 * i, j - 1) = sw * basis.gradient(j, r.points[i]);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
        cod.setThreshold(1e-13);
        const Eigen::VectorXd c = cod.solve(f);
        total += (A * c - f).squaredNorm();
    }
    return std::sqrt(total);
}

double best_approx_error_planewave(const ComplexField& u, double k, int q, const PolygonalMesh& mesh) {
    double total = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Polygon& K = mesh.element(e);
        const PlaneWaveBasis basis(k, q, K.barycenter());
        const int order = 10 + static_cast<int>(std::ceil(k * K.diameter()));
        const QuadratureRule r = polygon_rule(K, order);
        const int n = static_cast<int>(r.size());
        const int p = basis.size();
        Eigen::MatrixXcd A(3 * n, p);
        Eigen::VectorXcd f(3 * n);
        for (int i = 0; i < n; ++i) {
            const double sw = std::sqrt(r.weights[i]);
            const Point& x = r.points[i];
            f(3 * i) = sw * k * u.value(x);
            f.segment<2>(3 * i + 1) = sw * u.gradient(x);
            for (int l = 0; l < p; ++l) {
                A(3 * i, l) = sw * k * basis.value(l, x);
                A.block<2, 1>(3 * i + 1, l) = sw * basis.gradient(l, x);
            }
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
        cod.setThreshold(1e-13);
        const Eigen::VectorXcd c = cod.solve(f);
        total += (A * c - f).squaredNorm();
    }
    return std::sqrt(total);
}

double weighted_norm_squared(const ComplexField& v, double k, const Polygon& polygon, int order) {
    const QuadratureRule r = polygon_rule(polygon, order);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        s += r.weights[i] * (v.gradient(r.points[i]).squaredNorm() + k * k * std::norm(v.value(r.points[i])));
    return s;
}

}  // namespace tvem
