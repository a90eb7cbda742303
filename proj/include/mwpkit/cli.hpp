#pragma once

#include <string>
#include <vector>

namespace mwpkit::cli {

/// Dispatch the pipeline subcommands (gen-arith, gen-unit, compose,
/// augment-arith, augment-unit, mix, eval, stats). Returns the process exit
/// code: 0 on success, 1 on validation errors, 2 on I/O errors. Diagnostics
/// go to stderr; data goes to files or stdout only.
int run(const std::vector<std::string>& args);

}  // namespace mwpkit::cli
