#include "commands.hpp"

#include "tvem/helmholtz.hpp"
#include "tvem/laplace.hpp"
#include "tvem/nep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>

namespace tvem::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", x);
    return buf;
}

void provenance(const RunConfig& c, std::ostream& out) {
    out << "# tvem " << TVEM_VERSION << " config=" << config_hash(c) << " seed=" << c.seed << '\n';
    out << "# config " << canonical(c).dump() << '\n';
}

bool is_lattice(const std::string& name) {
    try {
        parse_lattice_kind(name);
        return true;
    } catch (const InvalidArgument&) {
        return false;
    }
}

// Lattice window with n cells per direction and mesh size h, or the mesh stored at config.mesh.
PolygonalMesh make_mesh(const RunConfig& c, int n) {
    if (!is_lattice(c.mesh)) return read_mesh_json(c.mesh);
    const LatticeKind kind = parse_lattice_kind(c.mesh);
    const double h = c.h > 0.0 ? c.h * c.n / n : 1.0 / n;
    if (kind == LatticeKind::Square && c.h == 0.0) return unit_square_mesh(n);
    return lattice_mesh(kind, n, h);
}

double eoc(double e0, double e1, double h0, double h1) {
    if (!(e0 > 0.0 && e1 > 0.0)) return nan;
    return std::log(e0 / e1) / std::log(h0 / h1);
}

// exp(x) cos(y)
const RealField laplace_smooth{[](const Point& x) { return std::exp(x.x()) * std::cos(x.y()); },
                               [](const Point& x) {
                                   return Eigen::Vector2d(std::exp(x.x()) * std::cos(x.y()),
                                                          -std::exp(x.x()) * std::sin(x.y()));
                               }};
const RealField laplace_zero{[](const Point&) { return 0.0; }, [](const Point&) { return Eigen::Vector2d::Zero().eval(); }};

// Plane wave along a direction outside every equispaced basis set of moderate size.
ComplexField plane_wave(double k) {
    const Point d(std::cos(0.3), std::sin(0.3));
    return {[=](const Point& x) { return std::exp(I_unit * k * d.dot(x)); },
            [=](const Point& x) {
                const Complex e = I_unit * k * std::exp(I_unit * k * d.dot(x));
                return CVector2(e * d.x(), e * d.y());
            }};
}

struct Quadratic {
    Eigen::MatrixXcd A0, A1, A2;
    NepFunction function() const {
        return {static_cast<int>(A0.rows()), [this](Complex z) { return Eigen::MatrixXcd(A0 + z * A1 + z * z * A2); },
                [this](Complex z) { return Eigen::MatrixXcd(A1 + 2.0 * z * A2); }};
    }
    // Eigenvalues of the first companion linearization.
    Eigen::VectorXcd companion_eigenvalues() const {
        const Eigen::Index n = A0.rows();
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A2);
        C.topRightCorner(n, n).setIdentity();
        C.bottomLeftCorner(n, n) = -lu.solve(A0);
        C.bottomRightCorner(n, n) = -lu.solve(A1);
        return Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(C, false).eigenvalues();
    }
};

// Circle about the origin through the widest relative gap among the smallest eigenvalue moduli.
Contour separated_contour(const Eigen::VectorXcd& ev, int points) {
    std::vector<double> r;
    for (Complex z : ev) r.push_back(std::abs(z));
    std::sort(r.begin(), r.end());
    double best = 0.0, radius = 1.0;
    for (std::size_t i = 0; i + 1 < r.size() && i < 8; ++i) {
        const double gap = (r[i + 1] - r[i]) / r[i + 1];
        if (gap > best) {
            best = gap;
            radius = 0.5 * (r[i] + r[i + 1]);
        }
    }
    return {0.0, radius, points};
}

// Symmetric Hausdorff distance; infinite when the counts differ.
double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    auto one_way = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
        double worst = 0.0;
        for (Complex u : x) {
            double d = std::numeric_limits<double>::infinity();
            for (Complex v : y) d = std::min(d, std::abs(u - v));
            worst = std::max(worst, d);
        }
        return worst;
    };
    return std::max(one_way(a, b), one_way(b, a));
}

std::vector<Complex> values(const NepResult& r) {
    std::vector<Complex> v;
    for (const auto& p : r.accepted) v.push_back(p.value);
    return v;
}

}  // namespace

int cmd_mesh(const RunConfig& c, std::ostream& out) {
    const PolygonalMesh mesh = make_mesh(c, c.n);
    const MeshQualityReport q = shape_regularity(mesh);
    std::clog << "elements " << mesh.num_elements() << ", edges " << mesh.num_edges() << ", vertices "
              << mesh.num_vertices() << ", h " << num(mesh.max_diameter()) << ", gamma " << num(q.gamma_estimate)
              << ", flagged " << q.flagged_count << '\n';
    out << mesh_to_json(mesh) << '\n';
    return 0;
}

int cmd_convergence(const RunConfig& c, std::ostream& out) {
    provenance(c, out);
    out << "problem,mesh,level,h,dofs,error,rate\n";
    const bool from_file = !is_lattice(c.mesh);
    const int levels = from_file ? 1 : c.levels;
    std::vector<double> hs, errs;
    std::vector<std::string> diagnostics;
    for (int level = 0; level < levels; ++level) {
        const PolygonalMesh mesh = make_mesh(c, c.n << level);
        double err = 0.0;
        Eigen::Index dofs = 0;
        if (c.problem == "laplace") {
            const RealField& u = c.solution == "zero" ? laplace_zero : laplace_smooth;
            const LaplaceSolution sol = solve_laplace(mesh, u.value, {c.p});
            err = laplace_projected_error(mesh, sol, u);
            dofs = sol.dofs.size();
        } else {
            const double k = c.ks.front();
            HelmholtzOptions opts;
            opts.q = c.q;
            opts.sigma = {c.sigma, true};
            const ComplexField u = c.solution == "zero"
                                       ? ComplexField{[](const Point&) { return Complex(0.0); },
                                                      [](const Point&) { return CVector2::Zero().eval(); }}
                                       : plane_wave(k);
            const HelmholtzSolution sol = solve_helmholtz(mesh, k, impedance_data(u, k), opts);
            err = helmholtz_projected_error(mesh, sol, u);
            dofs = sol.dofs.size();
            const double h = mesh.max_diameter();
            diagnostics.push_back("# diagnostic level=" + std::to_string(level) + " hk2=" + num(h * k * k) +
                                  " max_stiffness_condition=" + num(sol.max_stiffness_condition));
        }
        hs.push_back(mesh.max_diameter());
        errs.push_back(err);
        const double rate = level > 0 ? eoc(errs[level - 1], err, hs[level - 1], hs[level]) : nan;
        out << c.problem << ',' << (from_file ? c.mesh : to_string(parse_lattice_kind(c.mesh))) << ',' << level << ','
            << num(hs.back()) << ',' << dofs << ',' << num(err) << ',' << num(rate) << '\n';
    }
    double slope = nan;
    try {
        slope = fit_rate(hs, errs, std::numeric_limits<double>::min(), std::numeric_limits<double>::infinity());
    } catch (const InvalidArgument&) {
    }
    const std::size_t m = errs.size();
    out << "# summary finest_pair_rate=" << num(m >= 2 ? eoc(errs[m - 2], errs[m - 1], hs[m - 2], hs[m - 1]) : nan)
        << " least_squares_rate=" << num(slope) << '\n';
    for (const auto& line : diagnostics) out << line << '\n';
    return 0;
}

int cmd_dispersion(const RunConfig& c, std::ostream& out) {
    provenance(c, out);
    out << "method,mesh,k,q,theta,re_kn,im_kn,dispersion,dissipation,total,dim_subspace\n";
    std::vector<std::string> summary;
    std::size_t failures = 0;
    for (const DispersionJob& job : dispersion_jobs(c)) {
        const std::vector<double> thetas = c.thetas.empty() ? theta_grid(c.theta_grid, job.q) : c.thetas;
        std::vector<double> maxima;
        for (double k : job.ks) {
            std::vector<DispersionRecord> recs;
            if (job.method == DispersionMethod::FEM) {
                for (double t : thetas) recs.push_back(fem_record(k, job.q, t));
            } else {
                BlochSettings bs;
                bs.helmholtz.sigma = {c.sigma, true};
                bs.fluxes = {c.alpha, c.beta};
                NepSettings ns;
                ns.nep.seed = c.seed;
                ns.points = c.contour_points;
                ns.radius = c.contour_radius;
                const auto op = BlochOperator::build(build_lattice(job.lattice), job.method, k, job.q, bs);
                recs = sweep_theta(op, thetas, ns, c.threads);
            }
            for (const auto& r : recs) {
                out << to_string(r.method) << ',' << to_string(r.lattice) << ',' << num(r.k) << ',' << r.q << ','
                    << num(r.theta) << ',';
                if (r.ok)
                    out << num(r.kn.real()) << ',' << num(r.kn.imag()) << ',' << num(r.dispersion) << ','
                        << num(r.dissipation) << ',' << num(r.total);
                else
                    out << "nan,nan,nan,nan,nan";
                out << ',' << r.dimension << '\n';
            }
            const ThetaMaxima m = max_over_theta(recs);
            failures += m.failures;
            maxima.push_back(m.total);
            summary.push_back("# max method=" + to_string(job.method) + " mesh=" + to_string(job.lattice) +
                              " q=" + std::to_string(job.q) + " k=" + num(k) + " total=" + num(m.total) +
                              " dispersion=" + num(m.dispersion) + " dissipation=" + num(m.dissipation) +
                              " samples=" + std::to_string(m.samples) + " failures=" + std::to_string(m.failures));
        }
        if (job.ks.size() >= 2) {
            double eta = nan;
            try {
                eta = fit_rate(job.ks, maxima);
            } catch (const InvalidArgument&) {
            }
            summary.push_back("# rate method=" + to_string(job.method) + " mesh=" + to_string(job.lattice) +
                              " q=" + std::to_string(job.q) + " eta=" + num(eta) + " two_point=" +
                              num(two_point_rate(job.ks.front(), maxima.front(), job.ks.back(), maxima.back())));
        }
    }
    out << "# summary (relative errors, maxima over theta without alignment angles)\n";
    for (const auto& line : summary) out << line << '\n';
    if (failures > 0) std::clog << failures << " Bloch directions failed; see rows with nan\n";
    return 0;
}

int cmd_nep_selftest(const RunConfig& c, std::ostream& out) {
    provenance(c, out);
    out << "trial,inside,found,oracle_gap,refine_gap,seed_gap,max_residual\n";
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> nd;
    auto mat = [&] {
        Eigen::MatrixXcd M(6, 6);
        for (auto& x : M.reshaped()) x = Complex(nd(rng), nd(rng));
        return M;
    };
    const double tol = 1e-9;
    int bad = 0;
    for (int t = 0; t < c.count; ++t) {
        const Quadratic Q{mat(), mat(), mat()};
        const Eigen::VectorXcd all = Q.companion_eigenvalues();
        const Contour contour = separated_contour(all, c.contour_points);
        std::vector<Complex> inside;
        for (Complex z : all)
            if (std::abs(z - contour.center) < contour.radius) inside.push_back(z);
        NepOptions opts;
        opts.seed = c.seed;
        const NepResult base = solve_nep(Q.function(), contour, opts);
        Contour doubled = contour;
        doubled.points *= 2;
        NepOptions reseeded = opts;
        reseeded.seed = c.seed + 1 + static_cast<unsigned>(t);
        const double oracle_gap = set_distance(values(base), inside);
        const double refine_gap = set_distance(values(solve_nep(Q.function(), doubled, opts)), values(base));
        const double seed_gap = set_distance(values(solve_nep(Q.function(), contour, reseeded)), values(base));
        double residual = 0.0;
        for (const auto& p : base.accepted) residual = std::max(residual, p.residual);
        bad += !(oracle_gap <= tol && refine_gap <= tol && seed_gap <= tol);
        out << t << ',' << inside.size() << ',' << base.accepted.size() << ',' << num(oracle_gap) << ','
            << num(refine_gap) << ',' << num(seed_gap) << ',' << num(residual) << '\n';
    }
    out << "# summary trials=" << c.count << " failed=" << bad << " tolerance=" << num(tol) << '\n';
    return bad == 0 ? 0 : 1;
}

}  // namespace tvem::cli
