#pragma once

#include <iosfwd>
#include <string>

namespace solspec::cli {

/* exit codes */
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1; // self-test failure or internal inconsistency
constexpr int kExitInvalid = 2; // validation, precondition, domain, usage
constexpr int kExitResource = 3; // resource or convergence

int run(int argc, char const * const * argv, std::ostream & out, std::ostream & err);

} // namespace solspec::cli
