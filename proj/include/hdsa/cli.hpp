#pragma once

#include <string>
#include <vector>

namespace hdsa {

/// Subcommand dispatch for the `hdsa` tool. Exit status: 0 on success, 1 on
/// usage/config errors, 2 on numerical failures.
int cli_dispatch(const std::vector<std::string>& args);
int cli_dispatch(int argc, const char* const* argv);

}  // namespace hdsa
