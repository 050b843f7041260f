#pragma once

// Error taxonomy shared across the toolkit. Exceptions mark violated
// preconditions or non-recoverable numeric trouble; recoverable "no result"
// outcomes (inexact division, open orbit, no transversal element, ...) are
// std::optional at the call site instead.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace isochron {

// Malformed polynomial text. `offset` is the byte index of the offending
// token; `expected` lists what would have been accepted there.
struct ParseError : std::runtime_error {
    ParseError(std::string msg, std::size_t off, std::vector<std::string> exp)
        : std::runtime_error(std::move(msg)), offset(off), expected(std::move(exp)) {}
    std::size_t offset;
    std::vector<std::string> expected;
};

struct DivisionByZeroPolynomial : std::domain_error {
    DivisionByZeroPolynomial() : std::domain_error("polynomial division by zero") {}
};

// Caller handed an argument outside a documented domain (non-positive degree
// bound, amplitudes not increasing, chart evaluated at a pole, ...).
struct PreconditionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroField : PreconditionViolated {
    ZeroField() : PreconditionViolated("vector field is identically zero") {}
};

struct NotOdd : PreconditionViolated {
    NotOdd() : PreconditionViolated("coefficient function must be odd") {}
};

struct NotAreaPreserving : PreconditionViolated {
    NotAreaPreserving() : PreconditionViolated("jacobian determinant of (u, v) is not constantly 1") {}
};

struct OriginNotFixed : PreconditionViolated {
    OriginNotFixed() : PreconditionViolated("map must fix the origin") {}
};

struct ConditionsNotSatisfied : PreconditionViolated {
    using PreconditionViolated::PreconditionViolated;
};

// An internal consistency check failed after a computation that is supposed
// to be self-verifying (e.g. a nullspace vector that does not actually
// commute). Indicates a bug, never bad user input.
struct VerificationFailed : std::logic_error {
    using std::logic_error::logic_error;
};

struct StepSizeUnderflow : std::runtime_error {
    explicit StepSizeUnderflow(double t)
        : std::runtime_error("integrator step size underflow at t = " + std::to_string(t)) {}
};

struct OrbitNotClosed : std::runtime_error {
    explicit OrbitNotClosed(double amp)
        : std::runtime_error("orbit at amplitude " + std::to_string(amp) + " did not close"),
          amplitude(amp) {}
    double amplitude;
};

struct MultipleRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Change-of-variables chart hit (or came too close to) its pole.
struct SingularChart : PreconditionViolated {
    using PreconditionViolated::PreconditionViolated;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A flow composition left the integrable region (escape / near-singularity)
// before the requested time.
struct NotIntegrable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace isochron
