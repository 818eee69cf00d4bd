#ifndef HEUN_TOOLS_CLI_HPP
#define HEUN_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace heun::cli {

// Exit codes: 0 pass, 1 verification fail, 2 input/validation error,
// 3 numerical failure. CSV goes to --out (stdout by default) and is only
// written when the whole computation succeeded.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace heun::cli

#endif
