#pragma once

#include "tvem/geometry.hpp"

#include <vector>

namespace tvem {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule, exact for degree 2n-1.
GaussRule gauss_legendre(int n);

struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    std::size_t size() const noexcept { return points.size(); }
};

QuadratureRule segment_rule(const Point& a, const Point& b, int n);

// Collapsed Gauss rule on a triangle; exact for polynomials of degree 2n-2.
QuadratureRule triangle_rule(const Point& a, const Point& b, const Point& c, int n);

// Fan triangulation about a point of the kernel, so star-shaped polygons are handled.
QuadratureRule polygon_rule(const Polygon& polygon, int n);

}  // namespace tvem
