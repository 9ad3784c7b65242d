#pragma once

#include "tvem/types.hpp"

namespace tvem {

// Bivariate polynomial in scaled coordinates ((x - center) / scale).
class Poly2 {
public:
    Poly2() = default;
    Poly2(int degree, Point center, double scale);

    int degree() const noexcept { return degree_; }
    const Point& center() const noexcept { return center_; }
    double scale() const noexcept { return scale_; }

    double& coeff(int a, int b) { return c_(a, b); }
    double coeff(int a, int b) const { return c_(a, b); }

    double operator()(const Point& x) const;
    Eigen::Vector2d gradient(const Point& x) const;

    Poly2 dx() const;
    Poly2 dy() const;
    Poly2 laplacian() const;
    bool is_zero(double tol = 0.0) const;

private:
    int degree_ = 0;
    Point center_ = Point::Zero();
    double scale_ = 1.0;
    Eigen::MatrixXd c_ = Eigen::MatrixXd::Zero(1, 1);
};

// Legendre polynomial P_n(s) and its derivative.
double legendre(int n, double s);
double legendre_derivative(int n, double s);

}  // namespace tvem
