#include "tvem/fem_dispersion.hpp"

#include <cmath>

namespace tvem {

std::vector<double> series_divide(const std::vector<double>& a, const std::vector<double>& b, int n) {
    if (b.empty() || b[0] == 0.0) throw InvalidArgument("series division by a series with zero constant term");
    std::vector<double> c(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double s = j < static_cast<int>(a.size()) ? a[j] : 0.0;
        for (int i = 1; i <= j && i < static_cast<int>(b.size()); ++i) s -= b[i] * c[j - i];
        c[j] = s / b[0];
    }
    return c;
}

namespace {

// cos z and sin z / z as series in w = z^2.
std::vector<double> cos_series(int n) {
    std::vector<double> c(n);
    double f = 1.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) f *= -1.0 / ((2.0 * j - 1.0) * (2.0 * j));
        c[j] = f;
    }
    return c;
}

std::vector<double> sinc_series(int n) {
    std::vector<double> c(n);
    double f = 1.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) f *= -1.0 / ((2.0 * j) * (2.0 * j + 1.0));
        c[j] = f;
    }
    return c;
}

}  // namespace

std::vector<double> maclaurin_z_cot_z(int n) { return series_divide(cos_series(n), sinc_series(n), n); }

std::vector<double> maclaurin_z_tan_z(int n) {
    std::vector<double> shifted(n, 0.0);
    const std::vector<double> s = sinc_series(n);
    for (int j = 1; j < n; ++j) shifted[j] = s[j - 1];
    return series_divide(shifted, cos_series(n), n);
}

double Rational::operator()(double w) const {
    auto horner = [w](const std::vector<double>& c) {
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * w + *it;
        return v;
    };
    return horner(num) / horner(den);
}

Rational pade(const std::vector<double>& c, int L, int M) {
    if (L < 0 || M < 0) throw InvalidArgument("Pade degrees must be nonnegative");
    if (static_cast<int>(c.size()) < L + M + 1) throw InvalidArgument("not enough series coefficients for Pade");
    auto coef = [&](int j) { return j >= 0 ? c[j] : 0.0; };
    Rational r;
    r.den.assign(M + 1, 0.0);
    r.den[0] = 1.0;
    if (M > 0) {
        Eigen::MatrixXd A(M, M);
        Eigen::VectorXd rhs(M);
        for (int j = 1; j <= M; ++j) {
            for (int i = 1; i <= M; ++i) A(j - 1, i - 1) = coef(L + j - i);
            rhs(j - 1) = -coef(L + j);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible()) throw Error("singular Pade system [" + std::to_string(L) + "/" + std::to_string(M) + "]");
        const Eigen::VectorXd b = lu.solve(rhs);
        for (int i = 1; i <= M; ++i) r.den[i] = b(i - 1);
    }
    r.num.assign(L + 1, 0.0);
    for (int j = 0; j <= L; ++j)
        for (int i = 0; i <= std::min(j, M); ++i) r.num[j] += r.den[i] * coef(j - i);
    return r;
}

FemDispersionRelation::FemDispersionRelation(int q) : q_(q), n0_((q + 1) / 2), ne_(q / 2) {
    if (q < 1) throw InvalidArgument("FEM degree must be >= 1");
    // [2N0 / 2N0-2] and [2Ne+2 / 2Ne] in z become [N0 / N0-1] and [Ne+1 / Ne] in w = z^2.
    const int terms = 2 * (n0_ + ne_) + 4;
    cot_ = pade(maclaurin_z_cot_z(terms), n0_, n0_ - 1);
    tan_ = pade(maclaurin_z_tan_z(terms), ne_ + 1, ne_);
}

double FemDispersionRelation::R(double k) const {
    const double w = 0.25 * k * k;
    const double a = cot_(w);
    const double b = tan_(w);
    return (a - b) / (a + b);
}

FemWavenumber FemDispersionRelation::discrete_wavenumber(double k) const {
    const double w = 0.25 * k * k;
    const double a = cot_(w);
    const double b = tan_(w);
    const double s = b / (a + b);  // sin^2(k_n / 2)
    Complex base;
    FemWavenumber out;
    if (s >= 0.0 && s <= 1.0) {
        base = 2.0 * std::asin(std::sqrt(s));
    } else {
        base = std::acos(Complex((a - b) / (a + b), 0.0));
        out.propagative = false;
    }
    // k_n in {2 pi m +- base}
    const int m0 = static_cast<int>(std::floor(k / (2.0 * pi)));
    double best = std::numeric_limits<double>::infinity();
    for (int m = m0 - 1; m <= m0 + 1; ++m)
        for (double sign : {1.0, -1.0}) {
            const Complex cand = 2.0 * pi * m + sign * base;
            if (cand.real() < 0.0) continue;
            const double d = std::abs(k - cand);
            if (d < best) {
                best = d;
                out.kn = cand;
            }
        }
    if (!out.propagative && out.kn.imag() < 0.0) out.kn = std::conj(out.kn);
    return out;
}

}  // namespace tvem
