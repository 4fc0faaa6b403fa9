#include "solspec/errors.hpp"

#include <cstdio>

namespace solspec {

Error::Error(ErrorKind kind, std::string const & what)
    : std::runtime_error(what)
    , kind_(kind)
{
}

char const * Error::kind_name() const
{
    switch (kind_) {
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Inconsistency: return "inconsistency";
    }
    return "unknown";
}

static std::string with_estimates(std::string const & w, double a, double b)
{
    char buf[96];
    std::snprintf(buf, sizeof(buf), " (last estimates %.12g, %.12g)", a, b);
    return w + buf;
}

ConvergenceError::ConvergenceError(std::string const & w, double prev, double last)
    : Error(ErrorKind::Convergence, with_estimates(w, prev, last))
    , previous(prev)
    , last(last)
{
}

} // namespace solspec
