#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace specmoment::cli {

// Full command-line front end; returns the process exit status.
// 0 success, 2 when no evaluation route admits the request, 1 for
// parse/domain/tolerance failures.  Results go to out, diagnostics to err.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace specmoment::cli
