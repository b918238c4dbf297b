#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssq {

// args excludes the program name.  0: success, 1: predicate false (check) or
// no lift (lift), 2: any error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssq
