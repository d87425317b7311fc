#ifndef AGGRFIX_CLI_HPP
#define AGGRFIX_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace aggrfix {

// The aggrfix driver: `run` and `bench` subcommands. Returns the process
// exit code: 0 ok, 1 user error, 2 capacity error, 3 internal failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace aggrfix

#endif
