#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace casched {

// Dispatches a full command line (without argv[0]). Returns 0 on success, 1
// on validation/usage errors or failed reproduce assertions, 2 when a
// request hits a cap or an infeasible method.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casched
