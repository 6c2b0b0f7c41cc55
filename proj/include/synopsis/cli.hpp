#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace synopsis {

/// Runs one subcommand. The summary object goes to `out`, usage and errors to
/// `err`. Returns 0 on success, 1 on bad input, 2 on any other failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace synopsis
