#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace addrhash::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Runs one `addrhash` invocation. `args` excludes the program name. `in` is
/// read wherever a path of `-` names an input, `out` wherever it names an
/// output.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace addrhash::cli
