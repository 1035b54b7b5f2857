#pragma once

#include <stdexcept>
#include <string>

namespace qfrac {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Scalar operation evaluated outside its domain (zero argument, negative real axis, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Cauchy kernel requested at a point of its singular sphere.
class SingularKernelError : public Error {
public:
    explicit SingularKernelError(const std::string& msg) : Error(msg) {}
};

// Matrix inversion failed; carries the condition estimate of the embedding.
class NotInvertibleError : public Error {
public:
    NotInvertibleError(const std::string& msg, double cond)
        : Error(msg), condition(cond) {}
    double condition;
};

// Resolvent-type operator requested at or near the S-spectrum.
class SpectralSingularityError : public Error {
public:
    explicit SpectralSingularityError(const std::string& msg) : Error(msg) {}
};

// An operation's hypothesis does not hold (sectoriality, angle conditions, ...).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// Integration path touches a singular sphere, the branch cut or is malformed.
class PathInvalidError : public Error {
public:
    explicit PathInvalidError(const std::string& msg) : Error(msg) {}
};

// A quadrature or series did not converge where a converged result is required.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// A mandatory cross-check failed beyond tolerance; carries the worst residual.
class InconsistencyError : public Error {
public:
    InconsistencyError(const std::string& msg, double worst)
        : Error(msg), worstResidual(worst) {}
    double worstResidual;
};

// Input file could not be parsed; position is 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line_, long column_)
        : Error(msg), line(line_), column(column_) {}
    long line;
    long column;
};

} // namespace qfrac
