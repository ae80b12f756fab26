#ifndef FDR_ERRORS_HPP
#define FDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdr {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A curve is not a member of the requested weighted Sobolev space
/// (some decay rate a fails a > alpha/2, so the norm integral diverges).
class MembershipError : public Error {
public:
    using Error::Error;
};

/// Spanning functions are linearly dependent beyond tolerance.
class DependenceError : public Error {
public:
    using Error::Error;
};

/// A volatility specification violates a declared assumption.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Invalid time stepping request (e.g. dt > horizon).
class StepError : public Error {
public:
    using Error::Error;
};

/// Grid advection step violates the CFL restriction dt <= dy.
class CFLError : public Error {
public:
    using Error::Error;
};

/// Benchmark matrix is numerically singular (condition number too large).
class SingularError : public Error {
public:
    using Error::Error;
};

/// Paths simulated under the wrong measure for the requested operation.
class MeasureError : public Error {
public:
    using Error::Error;
};

/// Operation requires a specific state dimension.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Pointwise maximizer requested at a node where V_xx >= 0.
class ConcavityError : public Error {
public:
    using Error::Error;
};

/// Inconsistent solver grids.
class GridError : public Error {
public:
    using Error::Error;
};

/// Value iteration blew up; domain or step size is misconfigured.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (model spec or quote file).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Repeated maturity in a quote set.
class DuplicateError : public Error {
public:
    using Error::Error;
};

}  // namespace fdr

#endif  // FDR_ERRORS_HPP
