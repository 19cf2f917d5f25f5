#ifndef VSDK_ERRORS_HPP
#define VSDK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vsdk {

/// Base class for all toolkit errors. The CLI maps each concrete type to a
/// distinct exit code, see tools/vsdk_cli.cpp.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or configuration (wrong sizes, bad enum names, ...).
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& msg) : Error(msg) {}
};

/// Input value outside the mathematical domain of an operation.
/// Shares the CLI exit code with ParameterError.
class DomainError : public ParameterError {
public:
    explicit DomainError(const std::string& msg) : ParameterError(msg) {}
};

/// Malformed input file. Carries a 1-based line number when known (0 = n/a).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_ = 0;
};

/// Linear system could not be factorized even after regularization escalation.
/// Carries the last regularization weight that was tried.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& msg, double final_lambda)
        : Error(msg), final_lambda_(final_lambda) {}
    double final_lambda() const { return final_lambda_; }

private:
    double final_lambda_ = 0.0;
};

/// An iterative solver hit its iteration cap without reaching tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

} // namespace vsdk

#endif
