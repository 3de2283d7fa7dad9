#ifndef SOFICLAB_CLI_HPP
#define SOFICLAB_CLI_HPP

#include <iosfwd>

namespace soficlab {

/// Runs one command. Exit codes: 0 computed, 1 negative verdict of a
/// decision command, 2 error or bad usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soficlab

#endif
