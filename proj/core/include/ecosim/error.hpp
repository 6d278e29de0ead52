#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecosim {

// Root of every error raised by the library. Callers that only need to
// distinguish configuration problems from bad input data can catch
// ConfigError and DataError respectively.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FieldError {
    std::string field;
    std::string message;
};

// Invalid run configuration. Carries one entry per offending field so the
// HTTP layer can report them individually.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    ConfigError(std::string field, std::string message);

    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    std::vector<FieldError> errors_;
};

class InvalidThresholds : public ConfigError {
public:
    InvalidThresholds(int new_threshold, int old_threshold);
};

// Input data (stock, tables, sample sizes) that cannot be used.
class DataError : public Error {
public:
    using Error::Error;
};

class MissingColumn : public DataError {
public:
    explicit MissingColumn(const std::string& column);
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

// `row` is the 1-based data row index (the header is row 0).
class RowError : public DataError {
public:
    RowError(std::size_t row, const std::string& reason);
    std::size_t row() const noexcept { return row_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t row_;
    std::string reason_;
};

class UnknownCode : public DataError {
public:
    UnknownCode(std::string attribute, std::string value);
    const std::string& attribute() const noexcept { return attribute_; }
    const std::string& value() const noexcept { return value_; }

private:
    std::string attribute_;
    std::string value_;
};

class MalformedRow : public DataError {
public:
    MalformedRow(std::size_t row, const std::string& reason);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class DuplicateArchetype : public DataError {
public:
    explicit DuplicateArchetype(const std::string& code);
};

class NegativeEmission : public DataError {
public:
    NegativeEmission(const std::string& code, char stage);
};

class MissingArchetype : public DataError {
public:
    explicit MissingArchetype(const std::string& code);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class SampleTooLarge : public DataError {
public:
    SampleTooLarge(std::size_t requested, std::size_t available);
};

class MissingCostEntry : public DataError {
public:
    explicit MissingCostEntry(const std::string& entry);
};

class RankDeficient : public DataError {
public:
    explicit RankDeficient(std::string column);
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class EncodingMismatch : public Error {
public:
    explicit EncodingMismatch(const std::string& column);
};

// Raised by the simulation driver when its cancel flag is set.
class Cancelled : public Error {
public:
    Cancelled() : Error("simulation cancelled") {}
};

}  // namespace ecosim
