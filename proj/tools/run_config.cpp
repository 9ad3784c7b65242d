#include "run_config.hpp"

#include <cinttypes>
#include <cstdio>

namespace tvem::cli {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

bool is_lattice_name(const std::string& s) {
    try {
        parse_lattice_kind(s);
        return true;
    } catch (const InvalidArgument&) {
        return false;
    }
}

}  // namespace

void validate(const RunConfig& c) {
    require(c.n >= 1, "--n must be at least 1");
    require(c.h >= 0.0, "--size must be positive");
    require(c.levels >= 1, "--levels must be at least 1");
    require(c.q >= 1, "--q must be at least 1");
    require(c.p >= 1, "--p must be at least 1");
    require(c.theta_grid >= 1, "--theta-grid must be at least 1");
    require(c.sigma > 0.0, "--sigma must be positive");
    require(c.alpha > 0.0 && c.beta > 0.0, "--alpha and --beta must be positive");
    require(c.contour_radius >= 0.0, "--contour-radius must be positive (0 selects the default)");
    require(c.contour_points >= 16, "--contour-points must be at least 16");
    require(c.count >= 1, "--count must be at least 1");
    for (double k : c.ks) require(k > 0.0, "wavenumbers must be positive");
    require(c.problem == "laplace" || c.problem == "helmholtz", "--problem must be laplace or helmholtz");
    require(c.solution == "smooth" || c.solution == "zero", "--solution must be smooth or zero");
    if (c.command == "dispersion") {
        require(c.preset.empty() || c.preset == "fig5" || c.preset == "table1" || c.preset == "fem-compare",
                "unknown preset '" + c.preset + "' (fig5|table1|fem-compare)");
        require(is_lattice_name(c.mesh), "dispersion needs a lattice mesh (square|triangle|hexagon)");
        require(!c.ks.empty(), "--k needs at least one wavenumber");
        for (const auto& m : c.methods) parse_dispersion_method(m);
    }
}

std::vector<DispersionJob> dispersion_jobs(const RunConfig& c) {
    using M = DispersionMethod;
    using L = LatticeKind;
    std::vector<DispersionJob> jobs;
    if (c.preset == "fig5") {
        for (M m : {M::NcTVEM, M::PWDG}) jobs.push_back({m, L::Square, 7, {3.0}});
    } else if (c.preset == "table1") {
        for (M m : {M::NcTVEM, M::PWDG}) {
            jobs.push_back({m, L::Square, 3, {2.0, 0.3}});
            jobs.push_back({m, L::Triangle, 3, {2.0, 0.3}});
            jobs.push_back({m, L::Square, 5, {2.0, 0.8}});
            jobs.push_back({m, L::Triangle, 5, {3.0, 2.0}});
        }
    } else if (c.preset == "fem-compare") {
        for (M m : {M::NcTVEM, M::PWDG, M::FEM})
            for (int q = 1; q <= 7; ++q) jobs.push_back({m, L::Square, q, {3.0}});
    } else {
        for (const auto& name : c.methods) jobs.push_back({parse_dispersion_method(name), parse_lattice_kind(c.mesh), c.q, c.ks});
    }
    return jobs;
}

nlohmann::json canonical(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    j["seed"] = c.seed;
    if (c.command == "mesh") {
        j["mesh"] = c.mesh;
        j["n"] = c.n;
        j["size"] = c.h;
    } else if (c.command == "convergence") {
        j["mesh"] = c.mesh;
        j["n"] = c.n;
        j["levels"] = c.levels;
        j["problem"] = c.problem;
        j["solution"] = c.solution;
        if (c.problem == "laplace") {
            j["p"] = c.p;
        } else {
            j["k"] = c.ks;
            j["q"] = c.q;
            j["sigma"] = c.sigma;
        }
    } else if (c.command == "dispersion") {
        nlohmann::json jobs = nlohmann::json::array();
        for (const auto& job : dispersion_jobs(c))
            jobs.push_back({{"method", to_string(job.method)},
                            {"mesh", to_string(job.lattice)},
                            {"q", job.q},
                            {"k", job.ks}});
        j["preset"] = c.preset;
        j["jobs"] = jobs;
        j["theta_grid"] = c.theta_grid;
        j["theta"] = c.thetas;
        j["sigma"] = c.sigma;
        j["alpha"] = c.alpha;
        j["beta"] = c.beta;
        j["contour_radius"] = c.contour_radius;
        j["contour_points"] = c.contour_points;
    } else if (c.command == "nep-selftest") {
        j["count"] = c.count;
        j["contour_points"] = c.contour_points;
    }
    return j;
}

std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical(c).dump()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace tvem::cli
