#pragma once

#include <iosfwd>

namespace livingglobe {

/// Entry point of the `livingglobe` tool: ingest, build-atlas, serve and
/// export-frame. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace livingglobe
