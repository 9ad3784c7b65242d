#include "tvem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tvem {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    auto orient = [](const Point& a, const Point& b, const Point& c) { return cross(b - a, c - a); };
    const double scale = std::max({(p2 - p1).norm(), (q2 - q1).norm(), 1e-300});
    const double tol = 1e-13 * scale * scale;
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
        ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol)))
        return true;
    auto on_segment = [tol](const Point& a, const Point& b, const Point& c, double d) {
        if (std::abs(d) > tol) return false;
        return std::min(a.x(), b.x()) - 1e-14 <= c.x() && c.x() <= std::max(a.x(), b.x()) + 1e-14 &&
               std::min(a.y(), b.y()) - 1e-14 <= c.y() && c.y() <= std::max(a.y(), b.y()) + 1e-14;
    };
    return on_segment(q1, q2, p1, d1) || on_segment(q1, q2, p2, d2) || on_segment(p1, p2, q1, d3) ||
           on_segment(p1, p2, q2, d4);
}

}  // namespace

double signed_area(const std::vector<Point>& v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

bool is_simple(const std::vector<Point>& v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if ((v[(i + 1) % n] - v[i]).norm() == 0.0) return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    if (n < 3) throw DegenerateGeometry("polygon needs at least 3 vertices");
    area_ = signed_area(vertices_);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) scale = std::max(scale, (vertices_[i] - vertices_[j]).norm());
    diameter_ = scale;
    if (!(scale > 0.0) || std::abs(area_) <= 1e-14 * scale * scale) throw DegenerateGeometry("polygon has zero area");
    if (area_ < 0.0) throw DegenerateGeometry("polygon vertices are not counter-clockwise");
    if (!is_simple(vertices_)) throw DegenerateGeometry("polygon is self-intersecting");

    lengths_.resize(n);
    normals_.resize(n);
    Point c = Point::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        const Point d = b - a;
        lengths_[i] = d.norm();
        normals_[i] = Point(d.y(), -d.x()) / lengths_[i];
        c += cross(a, b) * (a + b);
    }
    barycenter_ = c / (6.0 * area_);
}

Polygon Polygon::translated(const Point& shift) const {
    std::vector<Point> v = vertices_;
    for (auto& p : v) p += shift;
    return Polygon(std::move(v));
}

Polygon Polygon::scaled(double factor) const {
    std::vector<Point> v = vertices_;
    for (auto& p : v) p *= factor;
    return Polygon(std::move(v));
}

std::vector<Point> polygon_kernel(const Polygon& polygon) {
    // Clip a bounding box against the inner half-plane of every edge.
    const auto& v = polygon.vertices();
    Point lo = v[0], hi = v[0];
    for (const auto& p : v) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Point pad = Point::Constant(polygon.diameter());
    lo -= pad;
    hi += pad;
    std::vector<Point> region = {lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}};
    const double tol = 1e-14 * polygon.diameter();
    for (std::size_t e = 0; e < polygon.size() && !region.empty(); ++e) {
        const Point a = polygon.edge_start(e);
        const Point n = polygon.edge_normal(e);
        auto dist = [&](const Point& p) { return n.dot(p - a); };  // <= 0 inside
        std::vector<Point> out;
        for (std::size_t i = 0; i < region.size(); ++i) {
            const Point& p = region[i];
            const Point& q = region[(i + 1) % region.size()];
            const double dp = dist(p);
            const double dq = dist(q);
            if (dp <= tol) out.push_back(p);
            if ((dp < -tol && dq > tol) || (dp > tol && dq < -tol)) out.push_back(p + (dp / (dp - dq)) * (q - p));
        }
        region = std::move(out);
    }
    if (region.size() < 3 || std::abs(signed_area(region)) <= 1e-14 * polygon.diameter() * polygon.diameter())
        return {};
    return region;
}

Ball star_ball(const Polygon& polygon) {
    // max r s.t. n_i . c + r <= n_i . a_i ; optimum sits on three active constraints.
    const std::size_t m = polygon.size();
    std::vector<Point> normals(m);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        normals[i] = polygon.edge_normal(i);
        rhs[i] = normals[i].dot(polygon.edge_start(i));
    }
    Ball best{polygon.barycenter(), 0.0};
    const double tol = 1e-12 * polygon.diameter();
    bool found = false;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t l = j + 1; l < m; ++l) {
                Eigen::Matrix3d A;
                A << normals[i].x(), normals[i].y(), 1.0, normals[j].x(), normals[j].y(), 1.0, normals[l].x(),
                    normals[l].y(), 1.0;
                if (std::abs(A.determinant()) < 1e-12) continue;
                const Eigen::Vector3d s = A.partialPivLu().solve(Eigen::Vector3d(rhs[i], rhs[j], rhs[l]));
                if (s.z() < 0.0) continue;
                bool feasible = true;
                for (std::size_t t = 0; t < m && feasible; ++t)
                    feasible = normals[t].dot(s.head<2>()) + s.z() <= rhs[t] + tol;
                if (feasible && (!found || s.z() > best.radius)) {
                    best = {s.head<2>(), s.z()};
                    found = true;
                }
            }
    return best;
}

}  // namespace tvem
