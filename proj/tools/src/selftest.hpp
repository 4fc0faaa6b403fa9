#pragma once

#include "solspec/manifold.hpp"

#include <iosfwd>
#include <string>

namespace solspec::cli {

/* reduced-scale invariant checks for one subcommand's module; prints one
 * line per check and returns true when all pass */
bool run_selftest(std::string const & module, Geometry const & g, std::ostream & out);

} // namespace solspec::cli
