#include "tvem/nep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tvem {

double nep_residual(const NepFunction& T, Complex lambda, const Eigen::VectorXcd& v, double norm_floor) {
    const Eigen::MatrixXcd M = T.eval(lambda);
    const double scale = std::max(M.norm(), norm_floor) * v.norm();
    return scale > 0.0 ? (M * v).norm() / scale : 0.0;
}

namespace {

struct RawEigs {
    std::vector<Complex> values;
    std::vector<Eigen::VectorXcd> vectors;
    int rank = 0;
    int probes = 0;
    int moments = 0;
    double t_scale = 0.0;  // mean ||T(z)||_F on the contour
};

struct Moments {
    std::vector<Eigen::MatrixXcd> A;
    double t_scale = 0.0;
    double inverse_scale = 0.0;  // radius * max ||T(z)^{-1} V||_F
    Complex count{0.0, 0.0};      // (1 / 2 pi i) int tr(T^{-1} T') dz
};

Eigen::MatrixXcd derivative_at(const NepFunction& T, Complex z) {
    if (T.derivative) return T.derivative(z);
    const double h = 1e-5 * std::max(1.0, std::abs(z));
    return (T.eval(z + h) - T.eval(z - h)) / (2.0 * h);
}

// Scaled moments A_j = (1/2 pi i) int ((z-c)/r)^j T(z)^{-1} V dz, j < 2M.
Moments contour_moments(const NepFunction& T, const Contour& c, const Eigen::MatrixXcd& V, int count) {
    const int n = T.dimension;
    Moments out;
    std::vector<Eigen::MatrixXcd>& A = out.A;
    A.assign(count, Eigen::MatrixXcd::Zero(n, V.cols()));
    for (int j = 0; j < c.points; ++j) {
        const double t = 2.0 * pi * (j + 0.5) / c.points;
        const Complex e = std::exp(I_unit * t);
        const Complex z = c.center + c.radius * e;
        const Eigen::MatrixXcd Tz = T.eval(z);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Tz);
        const Eigen::MatrixXcd X = lu.solve(V);
        out.t_scale += Tz.norm() / c.points;
        out.count += c.radius * e / static_cast<double>(c.points) * lu.solve(derivative_at(T, z)).trace();
        out.inverse_scale = std::max(out.inverse_scale, c.radius * X.norm());
        // dz / (2 pi i) = r e dt / (2 pi) ; trapezoid weight 2 pi / N
        Complex w = c.radius * e / static_cast<double>(c.points);
        for (int m = 0; m < count; ++m) {
            A[m] += w * X;
            w *= e;
        }
    }
    return out;
}

RawEigs beyn(const NepFunction& T, const Contour& c, const NepOptions& o) {
    const int n = T.dimension;
    int probes = o.probes > 0 ? std::min(o.probes, n) : std::min(n, 8);
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> normal;
    auto probe_matrix = [&](int cols) {
        Eigen::MatrixXcd V(n, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < n; ++i) V(i, j) = Complex(normal(rng), normal(rng));
        return V;
    };
    Eigen::MatrixXcd V = probe_matrix(probes);
    struct Hankel {
        Eigen::MatrixXcd B1;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd;
        int rank = 0;
        bool saturated = false;
    };
    for (;;) {
        const Moments mom = contour_moments(T, c, V, 2 * o.max_moments);
        const int l = static_cast<int>(V.cols());
        auto hankel = [&](int m) {
            Eigen::MatrixXcd B0(m * n, m * l);
            Hankel h;
            h.B1.resize(m * n, m * l);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    B0.block(i * n, j * l, n, l) = mom.A[i + j];
                    h.B1.block(i * n, j * l, n, l) = mom.A[i + j + 1];
                }
            h.svd.compute(B0, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const Eigen::VectorXd& s = h.svd.singularValues();
            while (h.rank < s.size() && s(h.rank) > o.rank_tol * s(0)) ++h.rank;
            h.saturated = h.rank == std::min(B0.rows(), B0.cols());
            return h;
        };
        RawEigs out;
        out.probes = l;
        out.t_scale = mom.t_scale;
        Hankel h = hankel(1);
        // Without enclosed eigenvalues the moments are quadrature noise relative to the size of T^{-1} V.
        if (h.svd.singularValues().size() == 0 || !(h.svd.singularValues()(0) > o.rank_tol * mom.inverse_scale))
            return out;
        // A zeroth moment can be numerically rank deficient when more eigenvalues than probes are enclosed, so the
        // rank must also reach the argument-principle count when that count is a clean integer.
        const double enclosed = std::round(mom.count.real());
        const bool counted = std::abs(mom.count - enclosed) < 0.1;
        int moments = 0;
        for (int m = 1; m <= o.max_moments; ++m) {
            if (m > 1) h = hankel(m);
            if (!h.saturated && (!counted || h.rank >= enclosed)) {
                moments = m;
                break;
            }
        }
        if (moments == 0) {
            if (l < n) {
                const int extra = std::min(n, 2 * l) - l;
                Eigen::MatrixXcd W(n, l + extra);
                W << V, probe_matrix(extra);
                V = std::move(W);
                continue;
            }
            moments = o.max_moments;
            h = hankel(moments);
        }
        const int r = h.rank;
        out.moments = moments;
        out.rank = r;
        const Eigen::MatrixXcd U = h.svd.matrixU().leftCols(r);
        const Eigen::MatrixXcd W = h.svd.matrixV().leftCols(r);
        const Eigen::VectorXd sinv = h.svd.singularValues().head(r).cwiseInverse();
        const Eigen::MatrixXcd Bred = U.adjoint() * h.B1 * W * sinv.asDiagonal();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Bred);
        for (int i = 0; i < r; ++i) {
            out.values.push_back(c.center + c.radius * es.eigenvalues()(i));
            Eigen::VectorXcd v = (U * es.eigenvectors().col(i)).head(n);
            const double nv = v.norm();
            out.vectors.push_back(nv > 0.0 ? Eigen::VectorXcd(v / nv) : v);
        }
        return out;
    }
}


// Newton on [T(l) v; u^H v - 1]; kept only if the residual improves.
void refine(const NepFunction& T, const Contour& c, double floor, NepEigenpair& pair) {
    const int n = T.dimension;
    const Eigen::VectorXcd u = pair.vector;
    Complex lambda = pair.value;
    Eigen::VectorXcd v = pair.vector / u.squaredNorm();
    double best = pair.residual;
    NepEigenpair best_pair = pair;
    for (int it = 0; it < 8; ++it) {
        const Eigen::MatrixXcd M = T.eval(lambda);
        Eigen::MatrixXcd J(n + 1, n + 1);
        J.topLeftCorner(n, n) = M;
        J.topRightCorner(n, 1) = derivative_at(T, lambda) * v;
        J.bottomLeftCorner(1, n) = u.adjoint();
        J(n, n) = 0.0;
        Eigen::VectorXcd F(n + 1);
        F.head(n) = M * v;
        F(n) = u.dot(v) - 1.0;
        const Eigen::VectorXcd d = J.fullPivLu().solve(F);
        if (!d.allFinite()) break;
        v -= d.head(n);
        lambda -= d(n);
        if (std::abs(lambda - c.center) >= c.radius) break;
        const double res = nep_residual(T, lambda, v, floor);
        if (res < best) {
            best = res;
            best_pair = {lambda, v.normalized(), res};
        }
        if (std::abs(d(n)) <= 1e-15 * std::max(1.0, std::abs(lambda))) break;
    }
    pair = best_pair;
}

}  // namespace

NepResult solve_nep(const NepFunction& T, const Contour& contour, const NepOptions& options) {
    if (T.dimension < 1 || !T.eval) throw InvalidArgument("NEP function needs a dimension and an evaluator");
    if (contour.points < 16) throw InvalidArgument("contour needs at least 16 quadrature points");
    if (!(contour.radius > 0.0)) throw InvalidArgument("contour radius must be positive");
    const RawEigs raw = beyn(T, contour, options);
    NepResult res;
    res.rank = raw.rank;
    res.probes = raw.probes;
    res.moments = raw.moments;
    if (raw.rank == 0) throw NepFailure("no eigenvalues inside the contour (rank collapse)");
    // T(lambda) can vanish identically at an eigenvalue (e.g. a multiple of the identity); the normalisation then
    // falls back to a small fraction of the contour's typical ||T||_F.
    const double floor = residual_norm_floor * raw.t_scale;

    if (options.verify_quadrature) {
        Contour fine = contour;
        fine.points *= 2;
        const RawEigs check = beyn(T, fine, options);
        for (const Complex z : raw.values) {
            if (std::abs(z - contour.center) >= contour.radius) continue;
            double gap = std::numeric_limits<double>::infinity();
            for (const Complex w : check.values) gap = std::min(gap, std::abs(z - w));
            if (gap > options.quadrature_tol * std::max(1.0, std::abs(z)))
                throw NepFailure("contour quadrature not converged: doubling N moved an eigenvalue by " +
                                 std::to_string(gap));
        }
    }

    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        NepEigenpair pair{raw.values[i], raw.vectors[i], 0.0};
        if (std::abs(pair.value - contour.center) >= contour.radius) continue;
        pair.residual = nep_residual(T, pair.value, pair.vector, floor);
        if (options.newton_refine) refine(T, contour, floor, pair);
        if (pair.residual <= options.residual_tol)
            res.accepted.push_back(std::move(pair));
        else
            res.rejected.push_back(std::move(pair));
    }
    auto order = [](const NepEigenpair& a, const NepEigenpair& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    };
    std::sort(res.accepted.begin(), res.accepted.end(), order);
    std::sort(res.rejected.begin(), res.rejected.end(), order);
    return res;
}

Complex select_discrete_wavenumber(std::span<const Complex> candidates, double k) {
    std::optional<Complex> best;
    for (const Complex z : candidates) {
        if (!(z.real() > 0.0)) continue;
        if (!best) {
            best = z;
            continue;
        }
        const double d = std::abs(k - z);
        const double db = std::abs(k - *best);
        if (d < db || (d == db && z.real() > best->real())) best = z;
    }
    if (!best) throw NepFailure("no candidate wavenumber with positive real part");
    return *best;
}

}  // namespace tvem
