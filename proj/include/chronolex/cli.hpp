#pragma once

#include <ostream>
#include <span>
#include <string>

namespace chronolex {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `chronolex` tool. args[0] is the program name.
/// Subcommands: ingest, query, export-distances, serve.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace chronolex
