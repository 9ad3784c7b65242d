#include "tvem/dispersion.hpp"

#include "tvem/fem_dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace tvem {

std::string to_string(DispersionMethod method) {
    switch (method) {
    case DispersionMethod::NcTVEM: return "ncTVEM";
    case DispersionMethod::PWDG: return "PWDG";
    case DispersionMethod::FEM: return "FEM";
    }
    return "?";
}

DispersionMethod parse_dispersion_method(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "nctvem" || s == "tvem") return DispersionMethod::NcTVEM;
    if (s == "pwdg") return DispersionMethod::PWDG;
    if (s == "fem") return DispersionMethod::FEM;
    throw InvalidArgument("unknown method '" + name + "' (nctvem|pwdg|fem)");
}

namespace {

class OffsetBlocks {
public:
    OffsetBlocks(std::vector<Offset> allowed, int dim) : allowed_(std::move(allowed)), dim_(dim) {
        for (std::size_t i = 0; i < allowed_.size(); ++i) index_[allowed_[i]] = static_cast<int>(i);
        blocks_.assign(allowed_.size(), Eigen::MatrixXcd::Zero(dim, dim));
    }
    // Returns false if the offset is outside the configured set.
    bool add(const Offset& n, int row, int col, const Eigen::MatrixXcd& blk) {
        auto it = index_.find(n);
        if (it == index_.end()) return false;
        blocks_[it->second].block(row, col, blk.rows(), blk.cols()) += blk;
        return true;
    }
    std::vector<Eigen::MatrixXcd> take() { return std::move(blocks_); }

private:
    std::vector<Offset> allowed_;
    int dim_;
    std::map<Offset, int> index_;
    std::vector<Eigen::MatrixXcd> blocks_;
};

Offset sub(const Offset& a, const Offset& b) { return {a[0] - b[0], a[1] - b[1]}; }

}  // namespace

BlochOperator BlochOperator::build(const TranslationInvariantMesh& lat, DispersionMethod method, double k, int q,
                                   const BlochSettings& settings) {
    if (method == DispersionMethod::FEM) throw InvalidArgument("the FEM relation has no Bloch operator; use fem_record");
    if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
    BlochOperator op;
    op.method_ = method;
    op.lattice_ = lat.kind;
    op.k_ = k;
    op.q_ = q;
    op.offsets_ = settings.offsets.empty() ? lat.neighbor_offsets : settings.offsets;
    for (const auto& n : op.offsets_) op.shifts_.push_back(lat.shift(n));
    const PolygonalMesh& mesh = lat.mesh;
    HelmholtzOptions hopt = settings.helmholtz;
    hopt.q = q;
    const auto dirs = equispaced_directions(2 * q + 1);
    const int p = static_cast<int>(dirs.size());

    auto shift_of = [&](int fundamental) {
        if (settings.representative_shift.empty()) return Offset{0, 0};
        return settings.representative_shift.at(fundamental);
    };

    if (method == DispersionMethod::NcTVEM) {
        const std::size_t nf = lat.fundamental_edges.size();
        std::vector<EdgeTraceSpace> spaces;
        std::vector<int> start;
        for (std::size_t t = 0; t < nf; ++t) {
            const Edge& e = mesh.edge(lat.fundamental_edges[t]);
            spaces.push_back(plane_wave_edge_space(k, dirs, e.length, e.tangent, hopt.sigma));
            start.push_back(op.dimension_);
            op.entity_dims_.push_back(spaces.back().dimension());
            op.dimension_ += spaces.back().dimension();
        }
        OffsetBlocks acc(op.offsets_, op.dimension_);
        for (int elem : lat.fundamental_elements) {
            const auto& edges = mesh.element_edges(elem);
            std::vector<const EdgeTraceSpace*> local;
            std::vector<LatticeRef> refs;
            for (int id : edges) {
                LatticeRef r = lat.edge_map[id];
                r.offset = sub(r.offset, shift_of(r.fundamental));
                refs.push_back(r);
                local.push_back(&spaces[r.fundamental]);
            }
            const HelmholtzElementOperators ops = helmholtz_element_operators(mesh.element(elem), k, local, hopt);
            for (std::size_t b = 0; b < edges.size(); ++b)
                for (std::size_t a = 0; a < edges.size(); ++a) {
                    const int db = local[b]->dimension();
                    const int da = local[a]->dimension();
                    const Eigen::MatrixXcd blk = ops.local_matrix.block(ops.offsets[b], ops.offsets[a], db, da);
                    if (!acc.add(sub(refs[a].offset, refs[b].offset), start[refs[b].fundamental],
                                 start[refs[a].fundamental], blk))
                        ++op.dropped_;
                }
        }
        op.blocks_ = acc.take();
    } else {
        const std::size_t nf = lat.fundamental_elements.size();
        op.dimension_ = static_cast<int>(nf) * p;
        op.entity_dims_.assign(nf, p);
        OffsetBlocks acc(op.offsets_, op.dimension_);
        for (std::size_t f = 0; f < nf; ++f)
            acc.add({0, 0}, static_cast<int>(f) * p, static_cast<int>(f) * p,
                    pwdg_volume_block(mesh.element(lat.fundamental_elements[f]), k, dirs));
        for (int id : lat.fundamental_edges) {
            const Edge& e = mesh.edge(id);
            if (e.is_boundary()) throw Error("fundamental edge on the window boundary; enlarge the window");
            std::array<LatticeRef, 2> refs;
            std::array<PwdgSide, 2> sides;
            for (int s = 0; s < 2; ++s) {
                refs[s] = lat.element_map[e.elements[s]];
                refs[s].offset = sub(refs[s].offset, shift_of(refs[s].fundamental));
                sides[s] = {mesh.element(e.elements[s]).barycenter(), s == 0 ? 1 : -1};
            }
            const PwdgEdgeBlocks E = pwdg_edge_blocks(e.a, e.b, e.normal, k, dirs, sides, settings.fluxes);
            for (int b = 0; b < 2; ++b)
                for (int a = 0; a < 2; ++a)
                    if (!acc.add(sub(refs[a].offset, refs[b].offset), refs[b].fundamental * p, refs[a].fundamental * p,
                                 E[b][a]))
                        ++op.dropped_;
        }
        op.blocks_ = acc.take();
    }
    return op;
}

Eigen::MatrixXcd BlochOperator::assemble(const CVector2& wavevector) const {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dimension_, dimension_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Complex phase = std::exp(I_unit * (wavevector(0) * shifts_[i].x() + wavevector(1) * shifts_[i].y()));
        T += phase * blocks_[i];
    }
    return T;
}

Eigen::MatrixXcd BlochOperator::assemble(Complex kn, double theta) const {
    return assemble(CVector2(kn * std::cos(theta), kn * std::sin(theta)));
}

Eigen::MatrixXcd BlochOperator::derivative(Complex kn, double theta) const {
    const Point d(std::cos(theta), std::sin(theta));
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dimension_, dimension_);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const double s = d.dot(shifts_[i]);
        T += (I_unit * s * std::exp(I_unit * kn * s)) * blocks_[i];
    }
    return T;
}

NepFunction BlochOperator::nep_function(double theta) const {
    NepFunction f;
    f.dimension = dimension_;
    f.eval = [this, theta](Complex z) { return assemble(z, theta); };
    f.derivative = [this, theta](Complex z) { return derivative(z, theta); };
    return f;
}

Contour default_contour(double k, const NepSettings& settings) {
    Contour c;
    c.center = k;
    c.radius = settings.radius > 0.0 ? settings.radius : 0.4 * std::max(k, 1.0);
    c.radius = std::min(c.radius, 0.9 * k);
    c.points = settings.points;
    return c;
}

DispersionRecord make_record(DispersionMethod method, LatticeKind lattice, double k, int q, double theta, Complex kn,
                             int dimension) {
    DispersionRecord r;
    r.method = method;
    r.lattice = lattice;
    r.k = k;
    r.q = q;
    r.theta = theta;
    r.kn = kn;
    r.dispersion = std::abs(k - kn.real());
    r.dissipation = std::abs(kn.imag());
    r.total = std::abs(k - kn);
    r.dimension = dimension;
    r.ok = true;
    return r;
}

DispersionRecord discrete_wavenumber(const BlochOperator& op, double theta, const NepSettings& settings) {
    DispersionRecord fail;
    fail.method = op.method();
    fail.lattice = op.lattice();
    fail.k = op.k();
    fail.q = op.q();
    fail.theta = theta;
    fail.dimension = op.dimension();
    try {
        const NepResult res = solve_nep(op.nep_function(theta), default_contour(op.k(), settings), settings.nep);
        std::vector<Complex> values;
        for (const auto& p : res.accepted) values.push_back(p.value);
        const Complex kn = select_discrete_wavenumber(values, op.k());
        return make_record(op.method(), op.lattice(), op.k(), op.q(), theta, kn, op.dimension());
    } catch (const Error& e) {
        fail.error = e.what();
        return fail;
    }
}

DispersionRecord fem_record(double k, int q, double theta) {
    const FemDispersionRelation rel(q);
    const FemWavenumber w = rel.discrete_wavenumber(k);
    // Tensor-product Q_q on one square: q^2 unknowns per cell.
    DispersionRecord r = make_record(DispersionMethod::FEM, LatticeKind::Square, k, q, theta, w.kn, q * q);
    if (!w.propagative) r.error = "evanescent";
    return r;
}

std::vector<double> theta_grid(int count, int q) {
    std::vector<double> t;
    for (int i = 0; i < count; ++i) t.push_back(2.0 * pi * i / count);
    const int p = 2 * q + 1;
    for (int l = 0; l < p; ++l) t.push_back(2.0 * pi * l / p);
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double x : t)
        if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
    return out;
}

bool is_alignment_angle(double theta, int q, double tol) {
    const int p = 2 * q + 1;
    const double step = 2.0 * pi / p;
    const double r = theta / step;
    return std::abs(r - std::round(r)) * step <= tol;
}

std::vector<DispersionRecord> sweep_theta(const BlochOperator& op, const std::vector<double>& thetas,
                                          const NepSettings& settings, unsigned threads) {
    std::vector<DispersionRecord> out(thetas.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(thetas.size(), 1)));
    auto work = [&](unsigned id) {
        for (std::size_t i = id; i < thetas.size(); i += threads) out[i] = discrete_wavenumber(op, thetas[i], settings);
    };
    if (threads <= 1) {
        work(0);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    return out;
}

ThetaMaxima max_over_theta(const std::vector<DispersionRecord>& records, bool exclude_alignment) {
    ThetaMaxima m;
    for (const auto& r : records) {
        m.k = r.k;
        m.q = r.q;
        if (exclude_alignment && r.method != DispersionMethod::FEM && is_alignment_angle(r.theta, r.q)) continue;
        if (!r.ok) {
            ++m.failures;
            continue;
        }
        ++m.samples;
        m.total = std::max(m.total, r.total / r.k);
        m.dispersion = std::max(m.dispersion, r.dispersion / r.k);
        m.dissipation = std::max(m.dissipation, r.dissipation / r.k);
    }
    return m;
}

double fit_rate(const std::vector<double>& ks, const std::vector<double>& errors, double lo, double hi) {
    if (ks.size() != errors.size()) throw InvalidArgument("fit_rate: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!(errors[i] >= lo && errors[i] <= hi) || !(ks[i] > 0.0)) continue;
        const double x = std::log(ks[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw InvalidArgument("fit_rate: fewer than two points inside the error window");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double two_point_rate(double k1, double e1, double k2, double e2) { return std::log(e1 / e2) / std::log(k1 / k2); }

}  // namespace tvem
