#pragma once

#include <stdexcept>
#include <string>

namespace solspec {

/* Exit-code classes used by the command-line tool:
 * validation/precondition/domain problems are the caller's fault (2),
 * resource and convergence problems are limits of the computation (3),
 * inconsistencies are bugs and should never be seen. */
enum class ErrorKind { Validation, Precondition, Domain, Resource, Convergence, Inconsistency };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string const & what);
    ErrorKind kind() const { return kind_; }
    char const * kind_name() const;
  private:
    ErrorKind kind_;
};

struct ValidationError : Error {
    explicit ValidationError(std::string const & w) : Error(ErrorKind::Validation, w) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(std::string const & w) : Error(ErrorKind::Precondition, w) {}
};
struct DomainError : Error {
    explicit DomainError(std::string const & w) : Error(ErrorKind::Domain, w) {}
};
struct ResourceError : Error {
    explicit ResourceError(std::string const & w) : Error(ErrorKind::Resource, w) {}
};
struct InconsistencyError : Error {
    explicit InconsistencyError(std::string const & w) : Error(ErrorKind::Inconsistency, w) {}
};

/* carries the last two estimates of the quantity that failed to settle */
struct ConvergenceError : Error {
    ConvergenceError(std::string const & w, double previous, double last);
    double previous;
    double last;
};

} // namespace solspec
