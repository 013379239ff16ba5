#pragma once

namespace wdbo::cli {

/// Entry point behind the `wdbo` binary; also callable from tests.
/// Subcommands: run, sensitivity, diag-conv, list.
int run_main(int argc, const char* const* argv);

}  // namespace wdbo::cli
