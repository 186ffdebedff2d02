// commands.hpp — One entry point per subcommand.  Each command validates
// its config section first (throwing ConfigError before any file is
// written), runs its experiment, writes CSV/JSON/SVG outputs through the
// RunContext, prints a one-line verdict to stdout, and returns 0 when all
// pinned checks pass or 1 on any tolerance failure.

#pragma once

#include "run_context.hpp"

namespace coopdyn::cli {

int cmd_superradiance(RunContext& ctx);
int cmd_supertransfer(RunContext& ctx);
int cmd_sectors(RunContext& ctx);
int cmd_dephasing(RunContext& ctx);
int cmd_diffusion(RunContext& ctx);

} // namespace coopdyn::cli
