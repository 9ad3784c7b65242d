#pragma once

#include "tvem/types.hpp"

#include <vector>

namespace tvem {

// Maclaurin coefficients c_j (j < n) in w = z^2.
std::vector<double> maclaurin_z_cot_z(int n);
std::vector<double> maclaurin_z_tan_z(int n);

// Power-series quotient a / b truncated to n terms (b[0] != 0).
std::vector<double> series_divide(const std::vector<double>& a, const std::vector<double>& b, int n);

struct Rational {
    std::vector<double> num;
    std::vector<double> den;  // den[0] = 1
    double operator()(double w) const;
};

// [L/M] Pade approximant of the series c (needs at least L+M+1 coefficients).
Rational pade(const std::vector<double>& c, int L, int M);

struct FemWavenumber {
    Complex kn;
    bool propagative = true;
};

// Dispersion relation cos(k_n) = R_q(k) of tensor-product degree-q elements on unit squares.
class FemDispersionRelation {
public:
    explicit FemDispersionRelation(int q);

    int q() const noexcept { return q_; }
    int n0() const noexcept { return n0_; }
    int ne() const noexcept { return ne_; }
    // Approximants in w = z^2: z cot z ~ cot_(w), z tan z ~ tan_(w).
    const Rational& cot_approximant() const noexcept { return cot_; }
    const Rational& tan_approximant() const noexcept { return tan_; }

    double R(double k) const;
    FemWavenumber discrete_wavenumber(double k) const;

private:
    int q_, n0_, ne_;
    Rational cot_, tan_;
};

}  // namespace tvem
