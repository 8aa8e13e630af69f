#pragma once

#include <stdexcept>
#include <string>

namespace bbfs {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the .bfs / skolem-file parsers. Carries a position and a
/// machine-checkable reason code.
class ParseError : public Error {
public:
    enum class Code {
        Syntax,
        UnknownVariable,
        DuplicateDeclaration,
        EmptyOutputs,
    };

    ParseError(Code code, const std::string& msg, int line, int col)
        : Error(msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          code(code), line(line), col(col) {}

    Code code;
    int line;
    int col;
};

/// eval() saw a variable the assignment does not cover.
class MissingAssignmentError : public Error {
public:
    using Error::Error;
};

/// substitute() bindings reference a variable that is itself being replaced.
class RecursiveBindingError : public Error {
public:
    using Error::Error;
};

/// The specification has no satisfying assignment at all.
class UnrealizableSpecError : public Error {
public:
    using Error::Error;
};

/// Training or loss evaluation was asked to run on an empty table.
class EmptyTableError : public Error {
public:
    using Error::Error;
};

/// A synthesis entry point was given a spec with no output variables.
class EmptyOutputsError : public Error {
public:
    using Error::Error;
};

/// The solver hit its configured conflict limit.
class ConflictLimitError : public Error {
public:
    using Error::Error;
};

/// exhaustive_verify() was asked to enumerate more inputs than it supports.
class DomainTooLargeError : public Error {
public:
    using Error::Error;
};

} // namespace bbfs
