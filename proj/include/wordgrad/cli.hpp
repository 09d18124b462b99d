#pragma once

#include <string>
#include <vector>

namespace wordgrad::cli {

// Dispatches train / eval / gradcheck / analyze. Returns 0 on success,
// nonzero on validation errors or failed checks. Reports go to stdout as a
// single JSON manifest (plus human-readable lines unless suppressed);
// progress goes to stderr.
int run(int argc, const char* const* argv);

// Same, with args excluding the program name.
int run(const std::vector<std::string>& args);

}  // namespace wordgrad::cli
