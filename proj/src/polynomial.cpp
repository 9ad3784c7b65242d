#include "tvem/polynomial.hpp"

namespace tvem {

Poly2::Poly2(int degree, Point center, double scale)
    : degree_(degree), center_(std::move(center)), scale_(scale),
      c_(Eigen::MatrixXd::Zero(std::max(degree, 0) + 1, std::max(degree, 0) + 1)) {
    if (degree < 0) throw InvalidArgument("polynomial degree must be >= 0");
    if (!(scale > 0.0)) throw InvalidArgument("polynomial scale must be positive");
}

double Poly2::operator()(const Point& x) const {
    const Point s = (x - center_) / scale_;
    // Horner in y for each power of x.
    double value = 0.0;
    for (int a = degree_; a >= 0; --a) {
        double col = 0.0;
        for (int b = degree_ - a; b >= 0; --b) col = col * s.y() + c_(a, b);
        value = value * s.x() + col;
    }
    return value;
}

Eigen::Vector2d Poly2::gradient(const Point& x) const { return {dx()(x), dy()(x)}; }

Poly2 Poly2::dx() const {
    Poly2 d(std::max(degree_ - 1, 0), center_, scale_);
    for (int a = 1; a <= degree_; ++a)
        for (int b = 0; a + b <= degree_; ++b) d.c_(a - 1, b) = a * c_(a, b) / scale_;
    return d;
}

Poly2 Poly2::dy() const {
    Poly2 d(std::max(degree_ - 1, 0), center_, scale_);
    for (int a = 0; a <= degree_; ++a)
        for (int b = 1; a + b <= degree_; ++b) d.c_(a, b - 1) = b * c_(a, b) / scale_;
    return d;
}

Poly2 Poly2::laplacian() const {
    // Combine the integer factors before scaling so cancellation is exact.
    Poly2 out(std::max(degree_ - 2, 0), center_, scale_);
    for (int a = 0; a + 2 <= degree_; ++a)
        for (int b = 0; a + b + 2 <= degree_; ++b)
            out.c_(a, b) = ((a + 2.0) * (a + 1.0) * c_(a + 2, b) + (b + 2.0) * (b + 1.0) * c_(a, b + 2)) /
                           (scale_ * scale_);
    return out;
}

bool Poly2::is_zero(double tol) const { return c_.cwiseAbs().maxCoeff() <= tol; }

double legendre(int n, double s) {
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = s;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * s * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double legendre_derivative(int n, double s) {
    // P_n' = sum over j = n-1, n-3, ... of (2j+1) P_j
    double d = 0.0;
    for (int j = n - 1; j >= 0; j -= 2) d += (2.0 * j + 1.0) * legendre(j, s);
    return d;
}

}  // namespace tvem
