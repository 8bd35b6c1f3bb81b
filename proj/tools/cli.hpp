#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circseq::cli {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "CIRCSEQ_OUTPUT_DIR";

/// Runs the command line; args[0] is the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace circseq::cli
