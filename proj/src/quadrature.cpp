#include "tvem/quadrature.hpp"

#include <cmath>

namespace tvem {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre needs n >= 1");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

QuadratureRule segment_rule(const Point& a, const Point& b, int n) {
    const GaussRule g = gauss_legendre(n);
    const double half = 0.5 * (b - a).norm();
    QuadratureRule r;
    for (int i = 0; i < n; ++i) {
        r.points.push_back(0.5 * (a + b) + 0.5 * g.nodes[i] * (b - a));
        r.weights.push_back(half * g.weights[i]);
    }
    return r;
}

QuadratureRule triangle_rule(const Point& a, const Point& b, const Point& c, int n) {
    const GaussRule g = gauss_legendre(n);
    const double jac = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    QuadratureRule r;
    r.points.reserve(n * n);
    r.weights.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (g.nodes[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (g.nodes[j] + 1.0) * (1.0 - u);
            r.points.push_back(a + u * (b - a) + v * (c - a));
            r.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u) * jac);
        }
    }
    return r;
}

QuadratureRule polygon_rule(const Polygon& polygon, int n) {
    Point apex = polygon.barycenter();
    // Barycenter may fall outside the kernel for non-convex elements.
    bool visible = true;
    for (std::size_t e = 0; e < polygon.size() && visible; ++e)
        visible = polygon.edge_normal(e).dot(apex - polygon.edge_start(e)) < -1e-12 * polygon.diameter();
    if (!visible) {
        const Ball ball = star_ball(polygon);
        if (!(ball.radius > 0.0)) throw DegenerateGeometry("polygon is not star-shaped");
        apex = ball.center;
    }
    QuadratureRule r;
    for (std::size_t e = 0; e < polygon.size(); ++e) {
        const QuadratureRule t = triangle_rule(apex, polygon.edge_start(e), polygon.edge_end(e), n);
        r.points.insert(r.points.end(), t.points.begin(), t.points.end());
        r.weights.insert(r.weights.end(), t.weights.begin(), t.weights.end());
    }
    return r;
}

}  // namespace tvem
