#pragma once

#include <stdexcept>
#include <string>

namespace pathcalc {

/// Caller violated a documented precondition (bad index, dimension mismatch,
/// malformed parameters).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a path functional, e.g. t outside [0, T].
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An identity that holds exactly by construction was violated. Always an
/// implementation bug, never bad luck.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pathcalc
