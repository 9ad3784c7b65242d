#pragma once

#include "tvem/types.hpp"

#include <vector>

namespace tvem {

// Simple polygon with counter-clockwise vertices. Edge i runs from vertex i to vertex i+1.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Point> vertices);

    std::size_t size() const noexcept { return vertices_.size(); }
    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    const Point& vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }

    double area() const noexcept { return area_; }
    double diameter() const noexcept { return diameter_; }
    const Point& barycenter() const noexcept { return barycenter_; }

    Point edge_start(std::size_t i) const { return vertex(i); }
    Point edge_end(std::size_t i) const { return vertex(i + 1); }
    Point edge_midpoint(std::size_t i) const { return 0.5 * (vertex(i) + vertex(i + 1)); }
    double edge_length(std::size_t i) const { return lengths_[i]; }
    Point edge_tangent(std::size_t i) const { return (vertex(i + 1) - vertex(i)) / lengths_[i]; }
    const Point& edge_normal(std::size_t i) const { return normals_[i]; }

    Polygon translated(const Point& shift) const;
    Polygon scaled(double factor) const;

private:
    std::vector<Point> vertices_;
    std::vector<double> lengths_;
    std::vector<Point> normals_;
    Point barycenter_ = Point::Zero();
    double area_ = 0.0;
    double diameter_ = 0.0;
};

double signed_area(const std::vector<Point>& vertices);
bool is_simple(const std::vector<Point>& vertices);

// Kernel of a star-shaped polygon (points seeing the whole polygon); empty if not star-shaped.
std::vector<Point> polygon_kernel(const Polygon& polygon);

struct Ball {
    Point center = Point::Zero();
    double radius = 0.0;
};

// Largest ball such that the polygon is star-shaped with respect to every point of it.
Ball star_ball(const Polygon& polygon);

}  // namespace tvem
