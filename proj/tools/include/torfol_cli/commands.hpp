#ifndef TORFOL_CLI_COMMANDS_HPP
#define TORFOL_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace torfol_cli {

// Command-line driver. `args` excludes the program name. Returns the
// process exit code:
//   0  success
//   1  unreadable input, parse or validation failure, misuse of a command
//   2  structurally unsupported request (fan not complete, chart not
//      smooth, pair not canonical without the override, ...)
//   3  flip cap exceeded
//   4  internal consistency violation
// `classify` additionally encodes its verdict: 0 terminal, 10 canonical
// but not terminal, 20 not canonical.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace torfol_cli

#endif
