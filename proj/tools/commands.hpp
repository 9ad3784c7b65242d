#pragma once

#include "run_config.hpp"

#include <ostream>

namespace tvem::cli {

// Each command writes its report to out and returns the process exit code.
int cmd_mesh(const RunConfig& config, std::ostream& out);
int cmd_convergence(const RunConfig& config, std::ostream& out);
int cmd_dispersion(const RunConfig& config, std::ostream& out);
int cmd_nep_selftest(const RunConfig& config, std::ostream& out);

}  // namespace tvem::cli
