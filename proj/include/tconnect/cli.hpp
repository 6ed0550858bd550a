#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tconnect::cli {

// exit codes: 0 all checks pass, 1 verified violation, 2 usage/parse
// error, 3 budget exceeded
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace tconnect::cli
