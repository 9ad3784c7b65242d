#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace tvem;
using namespace tvem::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--out", c.out, "Output file ('-' for stdout)");
    sub->add_option("--seed", c.seed, "Random seed (NEP probes, self-test problems)");
}

void add_mesh_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--mesh", c.mesh, "square|triangle|hexagon or a JSON mesh file");
    sub->add_option("--n", c.n, "Cells per direction (coarsest level)");
    sub->add_option("--size", c.h, "Mesh size of the coarsest level (default 1/n)");
}

void add_helmholtz_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--k", c.ks, "Wavenumber(s)")->delimiter(',');
    sub->add_option("--q", c.q, "Effective degree; 2q+1 plane waves");
    sub->add_option("--sigma", c.sigma, "Relative filter threshold");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Trefftz virtual element and plane-wave DG solvers with Bloch dispersion analysis", "tvem"};
    app.set_version_flag("--version", std::string(TVEM_VERSION));
    app.set_config("--config", "", "TOML/INI configuration; flags override file values");
    app.require_subcommand(1);

    auto* mesh = app.add_subcommand("mesh", "Generate (or validate) a mesh and write it as JSON");
    add_mesh_options(mesh, c);
    add_common(mesh, c);

    auto* conv = app.add_subcommand("convergence", "Refinement study with per-level errors and rates");
    add_mesh_options(conv, c);
    add_helmholtz_options(conv, c);
    conv->add_option("--problem", c.problem, "laplace|helmholtz");
    conv->add_option("--solution", c.solution, "smooth|zero");
    conv->add_option("--levels", c.levels, "Number of refinement levels");
    conv->add_option("--p", c.p, "Laplace polynomial degree");
    add_common(conv, c);

    auto* disp = app.add_subcommand("dispersion", "Discrete Bloch wavenumbers over a direction grid");
    disp->add_option("--mesh", c.mesh, "square|triangle|hexagon");
    disp->add_option("--method", c.methods, "nctvem|pwdg|fem (comma separated)")->delimiter(',');
    add_helmholtz_options(disp, c);
    disp->add_option("--theta-grid", c.theta_grid, "Equispaced directions (plane-wave angles are added)");
    disp->add_option("--theta", c.thetas, "Explicit directions in radians (replaces the grid)")->delimiter(',');
    disp->add_option("--alpha", c.alpha, "PWDG flux parameter alpha");
    disp->add_option("--beta", c.beta, "PWDG flux parameter beta");
    disp->add_option("--contour-radius", c.contour_radius, "Contour radius about k (0: default)");
    disp->add_option("--contour-points", c.contour_points, "Contour quadrature points");
    disp->add_option("--threads", c.threads, "Worker threads (0: hardware concurrency)");
    disp->add_option("--preset", c.preset, "fig5|table1|fem-compare");
    add_common(disp, c);

    auto* nep = app.add_subcommand("nep-selftest", "Contour solver against a companion linearization");
    nep->add_option("--count", c.count, "Number of random quadratic problems");
    nep->add_option("--contour-points", c.contour_points, "Contour quadrature points");
    add_common(nep, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (auto* sub : {mesh, conv, disp, nep})
            if (sub->parsed()) c.command = sub->get_name();
        if (disp->parsed() && !c.preset.empty())
            for (const char* flag : {"--method", "--mesh", "--k", "--q"})
                if (disp->count(flag) > 0)
                    throw InvalidArgument(std::string(flag) + " cannot be combined with --preset");
        validate(c);

        std::ostringstream buffer;
        int code = 0;
        if (c.command == "mesh") code = cmd_mesh(c, buffer);
        if (c.command == "convergence") code = cmd_convergence(c, buffer);
        if (c.command == "dispersion") code = cmd_dispersion(c, buffer);
        if (c.command == "nep-selftest") code = cmd_nep_selftest(c, buffer);

        if (c.out == "-") {
            std::cout << buffer.str();
        } else {
            std::ofstream file(c.out, std::ios::binary);
            if (!(file << buffer.str())) throw Error("cannot write " + c.out);
        }
        return code;
    } catch (const MeshFileError& e) {
        std::cerr << "error: invalid mesh file " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
