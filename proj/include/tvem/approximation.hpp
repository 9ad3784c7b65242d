#pragma once

#include "tvem/mesh.hpp"
#include "tvem/polynomial.hpp"

#include <functional>
#include <vector>

namespace tvem {

// Re/Im of ((z - z_K) / h_K)^m, m = 0..p; 2p+1 members, the constant first.
class HarmonicPolyBasis {
public:
    HarmonicPolyBasis(int degree, Point center, double scale);

    int degree() const noexcept { return degree_; }
    int size() const noexcept { return static_cast<int>(members_.size()); }
    const Poly2& member(int j) const { return members_[j]; }
    double value(int j, const Point& x) const { return members_[j](x); }
    Eigen::Vector2d gradient(int j, const Point& x) const { return members_[j].gradient(x); }

private:
    int degree_;
    std::vector<Poly2> members_;
};

std::vector<Point> equispaced_directions(int count);

// Smallest angle between two directions divided by 2*pi/count.
double direction_separation(const std::vector<Point>& directions);

// w_l(x) = exp(i k d_l . (x - center)), 2q+1 equispaced directions with d_1 = (1, 0).
class PlaneWaveBasis {
public:
    PlaneWaveBasis(double k, int q, Point center);
    PlaneWaveBasis(double k, std::vector<Point> directions, Point center);

    double k() const noexcept { return k_; }
    int size() const noexcept { return static_cast<int>(directions_.size()); }
    const std::vector<Point>& directions() const noexcept { return directions_; }
    const Point& direction(int l) const { return directions_[l]; }
    const Point& center() const noexcept { return center_; }
    double separation() const { return direction_separation(directions_); }

    Complex value(int l, const Point& x) const;
    CVector2 gradient(int l, const Point& x) const;

private:
    double k_;
    std::vector<Point> directions_;
    Point center_;
};

// Integral of exp(i kappa . x) over the segment [a, b] (closed form).
Complex segment_exp_integral(const Eigen::Vector2d& kappa, const Point& a, const Point& b);

// Integral of exp(i kappa . (x - origin)) over a polygon.
Complex polygon_exp_integral(const Eigen::Vector2d& kappa, const Polygon& polygon, const Point& origin);

// Element matrices for plane waves: mass M(l,m) = (w_m, w_l)_K and stiffness-part
// K(l,m) = (grad w_m, grad w_l)_K.
struct PlaneWaveElementMatrices {
    Eigen::MatrixXcd mass;
    Eigen::MatrixXcd grad;
};
PlaneWaveElementMatrices plane_wave_element_matrices(const PlaneWaveBasis& basis, const Polygon& polygon);

// Filtered orthogonal basis of an edge trace space: hat w_a = sum_r Q(r,a) w_r with
// ||hat w_a||^2 = lambda_a. Columns are ordered by decreasing eigenvalue.
struct EdgeTraceSpace {
    Eigen::MatrixXcd gram;           // G(r, m) = (w_m, w_r)_e
    Eigen::VectorXd all_eigenvalues;  // descending
    Eigen::MatrixXcd Q;              // raw x filtered
    Eigen::VectorXd lambda;          // kept eigenvalues
    double threshold = 0.0;          // absolute threshold actually applied

    int raw_dimension() const noexcept { return static_cast<int>(gram.rows()); }
    int dimension() const noexcept { return static_cast<int>(lambda.size()); }
};

struct FilterThreshold {
    double value = 1e-13;
    bool relative = true;  // relative to the largest |eigenvalue|
};

EdgeTraceSpace ortho_filter(const Eigen::MatrixXcd& gram, FilterThreshold sigma = {});

// Gram of midpoint-centred traces exp(i k d_r . (x - x_e)) on an edge of given length and tangent.
Eigen::MatrixXcd plane_wave_edge_gram(double k, const std::vector<Point>& directions, double length,
                                      const Point& tangent);

EdgeTraceSpace plane_wave_edge_space(double k, const std::vector<Point>& directions, double length,
                                     const Point& tangent, FilterThreshold sigma = {});

// Legendre polynomial P_alpha on an edge, parametrised from a to b.
double edge_legendre(int alpha, const Point& a, const Point& b, const Point& x);

struct RealField {
    std::function<double(const Point&)> value;
    std::function<Eigen::Vector2d(const Point&)> gradient;
};

struct ComplexField {
    std::function<Complex(const Point&)> value;
    std::function<CVector2(const Point&)> gradient;
};

// Broken H1-seminorm best approximation by harmonic polynomials of degree p.
double best_approx_error_harmonic(const RealField& u, int p, const PolygonalMesh& mesh);

// Broken ||.||_{1,k} best approximation by 2q+1 plane waves per element.
double best_approx_error_planewave(const ComplexField& u, double k, int q, const PolygonalMesh& mesh);

// ||v||_{1,k,K}^2 = |v|_1^2 + k^2 ||v||_0^2 on one polygon by quadrature.
double weighted_norm_squared(const ComplexField& v, double k, const Polygon& polygon, int order = 12);

}  // namespace tvem
