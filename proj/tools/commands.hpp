#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alignkit::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kNumeric = 3,
};

// args excludes the program name. "-" as a path means in/out.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace alignkit::cli
