// Command-line front end, callable in-process so that tests can drive it.
#pragma once

#include "symbisim/engine.h"

#include <iosfwd>
#include <string>
#include <vector>

namespace symbisim::cli {

enum ExitCode : int {
    kOk = 0,          // success, bisimilar, oracle agrees
    kNegative = 1,    // not bisimilar, oracle disagrees
    kUsage = 2,       // bad arguments, unreadable or malformed input
    kResource = 3,    // max_states / max_iters guard, closure violation
    kInternal = 4,    // broken engine invariant
};

// args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Partition read back from the JSON produced by `minimize --format json`.
Partition read_partition_json(const std::string &text);

}  // namespace symbisim::cli
