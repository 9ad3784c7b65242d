#pragma once

#include "tvem/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tvem {

// Holomorphic matrix function z -> T(z) of size dimension x dimension.
struct NepFunction {
    int dimension = 0;
    std::function<Eigen::MatrixXcd(Complex)> eval;
    std::function<Eigen::MatrixXcd(Complex)> derivative;  // optional; finite differences otherwise
};

struct Contour {
    Complex center{0.0, 0.0};
    double radius = 1.0;
    int points = 64;
};

struct NepOptions {
    int probes = 0;  // 0: min(dimension, 8)
    double rank_tol = 1e-10;
    unsigned seed = 20240611u;
    double residual_tol = 1e-8;
    bool newton_refine = true;
    bool verify_quadrature = false;  // rerun with 2N and compare
    double quadrature_tol = 1e-8;
    int max_moments = 6;
};

struct NepEigenpair {
    Complex value;
    Eigen::VectorXcd vector;
    double residual = 0.0;  // nep_residual with the contour floor
};

struct NepResult {
    std::vector<NepEigenpair> accepted;
    std::vector<NepEigenpair> rejected;
    int rank = 0;
    int probes = 0;
    int moments = 0;
};

NepResult solve_nep(const NepFunction& T, const Contour& contour, const NepOptions& options = {});

// ||T v|| / (max(||T||_F, norm_floor) ||v||)
double nep_residual(const NepFunction& T, Complex lambda, const Eigen::VectorXcd& v, double norm_floor = 0.0);

// Fraction of the mean contour ||T||_F below which T(lambda) counts as the zero matrix in residuals.
inline constexpr double residual_norm_floor = 1e-8;

// argmin |k - k_n| over candidates with Re > 0; ties to larger real part.
Complex select_discrete_wavenumber(std::span<const Complex> candidates, double k);

}  // namespace tvem
