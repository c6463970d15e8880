#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmp::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,  // a negative verdict under --assert
  kUsage = 2,     // bad flags or unparsable input
  kIo = 3,        // unreadable input or unwritable output
  kBudget = 4,    // a search budget ran out before the answer was known
};

/// Entry point of the mmpkit tool. argv[0] is the program name.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mmp::cli
