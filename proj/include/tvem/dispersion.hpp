#pragma once

#include "tvem/helmholtz.hpp"
#include "tvem/mesh.hpp"
#include "tvem/nep.hpp"
#include "tvem/pwdg.hpp"

#include <string>
#include <vector>

namespace tvem {

enum class DispersionMethod { NcTVEM, PWDG, FEM };

std::string to_string(DispersionMethod method);
DispersionMethod parse_dispersion_method(const std::string& name);

struct BlochSettings {
    HelmholtzOptions helmholtz{};  // q is taken from the build call
    PwdgFluxes fluxes{};
    std::vector<Offset> offsets;  // empty: {-1,0,1}^2
    // Per fundamental entity (edges for ncTVEM, elements for PWDG): lattice shift of the representative.
    std::vector<Offset> representative_shift;
};

// T(k_n) = sum_n exp(i k_n d . xi_n) M_n on the minimal generating subspace.
class BlochOperator {
public:
    static BlochOperator build(const TranslationInvariantMesh& lattice, DispersionMethod method, double k, int q,
                               const BlochSettings& settings = {});

    DispersionMethod method() const noexcept { return method_; }
    LatticeKind lattice() const noexcept { return lattice_; }
    double k() const noexcept { return k_; }
    int q() const noexcept { return q_; }
    int dimension() const noexcept { return dimension_; }
    const std::vector<Offset>& offsets() const noexcept { return offsets_; }
    const std::vector<Eigen::MatrixXcd>& blocks() const noexcept { return blocks_; }
    std::size_t dropped_couplings() const noexcept { return dropped_; }
    // Dimension contributed by each fundamental entity.
    const std::vector<int>& entity_dimensions() const noexcept { return entity_dims_; }
    const std::vector<Point>& lattice_shifts() const noexcept { return shifts_; }

    Eigen::MatrixXcd assemble(const CVector2& wavevector) const;
    Eigen::MatrixXcd assemble(Complex kn, double theta) const;
    Eigen::MatrixXcd derivative(Complex kn, double theta) const;

    NepFunction nep_function(double theta) const;

private:
    DispersionMethod method_ = DispersionMethod::NcTVEM;
    LatticeKind lattice_ = LatticeKind::Square;
    double k_ = 0.0;
    int q_ = 0;
    int dimension_ = 0;
    std::vector<Offset> offsets_;
    std::vector<Point> shifts_;
    std::vector<Eigen::MatrixXcd> blocks_;
    std::vector<int> entity_dims_;
    std::size_t dropped_ = 0;
};

struct DispersionRecord {
    DispersionMethod method = DispersionMethod::NcTVEM;
    LatticeKind lattice = LatticeKind::Square;
    double k = 0.0;
    int q = 0;
    double theta = 0.0;
    Complex kn{0.0, 0.0};
    double dispersion = 0.0;   // |Re(k - k_n)|
    double dissipation = 0.0;  // |Im k_n|
    double total = 0.0;        // |k - k_n|
    int dimension = 0;
    bool ok = false;
    std::string error;
};

struct NepSettings {
    NepOptions nep{};
    int points = 64;
    double radius = 0.0;  // 0: 0.4 max(k, 1), clipped to keep Re > 0
};

Contour default_contour(double k, const NepSettings& settings);

DispersionRecord make_record(DispersionMethod method, LatticeKind lattice, double k, int q, double theta, Complex kn,
                             int dimension);

// Solves T(k_n) u = 0 for one Bloch direction. Failures are reported in the record.
DispersionRecord discrete_wavenumber(const BlochOperator& op, double theta, const NepSettings& settings = {});

// FEM relation on squares (independent of theta).
DispersionRecord fem_record(double k, int q, double theta);

// count equispaced angles in [0, 2 pi) merged with the 2q+1 plane-wave angles.
std::vector<double> theta_grid(int count, int q);
bool is_alignment_angle(double theta, int q, double tol = 1e-12);

std::vector<DispersionRecord> sweep_theta(const BlochOperator& op, const std::vector<double>& thetas,
                                          const NepSettings& settings = {}, unsigned threads = 0);

struct ThetaMaxima {
    double k = 0.0;
    int q = 0;
    double total = 0.0;  // relative to k
    double dispersion = 0.0;
    double dissipation = 0.0;
    std::size_t failures = 0;
    std::size_t samples = 0;
};

ThetaMaxima max_over_theta(const std::vector<DispersionRecord>& records, bool exclude_alignment = true);

// Least-squares slope of log(err) against log(k) over points with err in [lo, hi].
double fit_rate(const std::vector<double>& ks, const std::vector<double>& errors, double lo = 1e-12, double hi = 1e-2);
double two_point_rate(double k1, double e1, double k2, double e2);

}  // namespace tvem
