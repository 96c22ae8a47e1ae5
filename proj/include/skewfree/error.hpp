#pragma once

#include <stdexcept>
#include <string>

namespace skewfree {

// Base class for every error this library throws on purpose.
struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inversion of zero, at any level: rational, polynomial quotient, series.
struct DivisionByZero : AlgebraError {
    using AlgebraError::AlgebraError;
};

// A flattening step was asked to emit integer coordinates before the
// denominators were cleared.
struct NotCleared : AlgebraError {
    using AlgebraError::AlgebraError;
};

// Two series (or a series and an expression) from different skew contexts
// were combined.
struct ContextMismatch : AlgebraError {
    using AlgebraError::AlgebraError;
};

// Text input did not match the expression grammar. `offset` is the byte
// position of the first offending character (equal to the input length
// when the input ended too early).
struct ParseError : AlgebraError {
    std::size_t offset;
    ParseError(const std::string& what, std::size_t off)
        : AlgebraError(what + " at offset " + std::to_string(off)), offset(off) {}
};

// An identifier outside the grammar, or `Y` used at the one-variable level.
struct UnknownSymbol : AlgebraError {
    using AlgebraError::AlgebraError;
};

// Scenario or Ore parameters outside their admissible range.
struct BadParams : AlgebraError {
    using AlgebraError::AlgebraError;
};

// The two linear parameter rows are proportional, so Xi = g f^-1 would be a
// scalar and generates nothing.
struct DegenerateXi : AlgebraError {
    using AlgebraError::AlgebraError;
};

// The requested construction has no generator pair at this level; the case
// is already settled elsewhere in the literature (see the message).
struct UnsupportedConstruction : AlgebraError {
    using AlgebraError::AlgebraError;
};

// The declared kernel of psi is wrong: psi does not vanish on a declared
// kernel generator.
struct BadKernel : AlgebraError {
    using AlgebraError::AlgebraError;
};

}  // namespace skewfree
