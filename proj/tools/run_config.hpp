#pragma once

#include "tvem/dispersion.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tvem::cli {

// One (method, lattice, q) series of a dispersion sweep over a list of wavenumbers.
struct DispersionJob {
    DispersionMethod method = DispersionMethod::NcTVEM;
    LatticeKind lattice = LatticeKind::Square;
    int q = 3;
    std::vector<double> ks;
};

struct RunConfig {
    std::string command;
    std::string mesh = "square";  // lattice name or path to a JSON mesh
    int n = 4;                    // cells per direction (mesh), coarsest level (convergence)
    double h = 0.0;               // 0: 1 / n
    std::string problem = "laplace";
    std::string solution = "smooth";  // smooth | zero
    int levels = 4;
    std::vector<std::string> methods{"nctvem"};
    std::vector<double> ks{3.0};
    int q = 3;
    int p = 2;
    int theta_grid = 360;
    std::vector<double> thetas;  // explicit angles replace the grid
    double sigma = 1e-13;
    double alpha = 0.5;
    double beta = 0.5;
    double contour_radius = 0.0;
    int contour_points = 64;
    unsigned seed = 20240611u;
    int count = 50;
    std::string preset;
    std::string out = "-";
    unsigned threads = 0;  // does not affect results; excluded from the hash
};

// Validates physical parameters and throws InvalidArgument on violations.
void validate(const RunConfig& config);

// Jobs of the named preset (fig5, table1, fem-compare), or of the method/mesh/q/k fields when no preset is set.
std::vector<DispersionJob> dispersion_jobs(const RunConfig& config);

// Canonical representation of every result-affecting field.
nlohmann::json canonical(const RunConfig& config);
// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace tvem::cli
