#pragma once

#include <stdexcept>
#include <string>

namespace shapebench {

/// Invalid or inconsistent configuration (bad key, out-of-range value, ...).
/// CLI maps this class to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition was violated by the caller.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

/// The feasible grid lattice is empty (pathological anchor/step).
class EmptyGridError : public std::runtime_error {
public:
    explicit EmptyGridError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An evaluation was requested past a configured hard budget cap.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// External objective: malformed response line, error response, or an
/// out-of-domain kWh value.
class ProtocolError : public std::runtime_error {
public:
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

/// External objective: the child process could not be launched, died before
/// responding, or could not be written to.
class ProcessError : public std::runtime_error {
public:
    explicit ProcessError(const std::string& msg) : std::runtime_error(msg) {}
};

/// External objective: no response line within the configured timeout.
class EvalTimeout : public std::runtime_error {
public:
    explicit EvalTimeout(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shapebench
