// SPDX-FileCopyrightText: Copyright (c) 2026 The assocnet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace assocnet {

/// Broad failure class; the CLI maps each kind to its own exit code.
enum class ErrorKind {
    config,       // bad flags, missing files, malformed run configuration
    data,         // parse and validation failures on input data
    computation,  // numerical degeneracy discovered while computing
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class ComputationError : public Error {
public:
    explicit ComputationError(const std::string& what) : Error(ErrorKind::computation, what) {}
};

/// Throws the subclass matching `kind`.
[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
    switch (kind) {
        case ErrorKind::config: throw ConfigError(what);
        case ErrorKind::data: throw DataError(what);
        case ErrorKind::computation: break;
    }
    throw ComputationError(what);
}

/// Malformed row in a text input. The line number is 1-based.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace assocnet
