#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace moran {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: invalid distributions, out-of-domain arguments, malformed configs.
// The CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Failures of a numeric pipeline on otherwise valid input. CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class ConstraintViolation : public ConfigError {
public:
    ConstraintViolation(std::string field, std::optional<std::size_t> atom_index, const std::string& message)
        : ConfigError(format(field, atom_index, message)), field_(std::move(field)), atom_index_(atom_index) {}

    const std::string& field() const noexcept { return field_; }
    std::optional<std::size_t> atom_index() const noexcept { return atom_index_; }

private:
    static std::string format(const std::string& field, std::optional<std::size_t> idx, const std::string& msg) {
        std::string out = "constraint violation [" + field;
        if (idx) out += ", atom " + std::to_string(*idx);
        return out + "]: " + msg;
    }

    std::string field_;
    std::optional<std::size_t> atom_index_;
};

class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnsupportedGeometry : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class TooLarge : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NoSignChange : public NumericError {
public:
    using NumericError::NumericError;
};

class WindowOutOfRange : public NumericError {
public:
    using NumericError::NumericError;
};

class InsufficientDepth : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace moran
