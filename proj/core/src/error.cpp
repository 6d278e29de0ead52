#include "ecosim/error.hpp"

#include <utility>

namespace ecosim {

namespace {

std::string join_field_errors(const std::vector<FieldError>& errors) {
    std::string out = "invalid configuration";
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out += i == 0 ? ": " : "; ";
        out += errors[i].field + ": " + errors[i].message;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : Error(join_field_errors(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

InvalidThresholds::InvalidThresholds(int new_threshold, int old_threshold)
    : ConfigError("thresholds", "require 0 < new (" + std::to_string(new_threshold) +
                                    ") < old (" + std::to_string(old_threshold) + ")") {}

MissingColumn::MissingColumn(const std::string& column)
    : DataError("missing column '" + column + "'"), column_(column) {}

RowError::RowError(std::size_t row, const std::string& reason)
    : DataError("row " + std::to_string(row) + ": " + reason), row_(row), reason_(reason) {}

UnknownCode::UnknownCode(std::string attribute, std::string value)
    : DataError("unknown " + attribute + " code '" + value + "'"),
      attribute_(std::move(attribute)),
      value_(std::move(value)) {}

MalformedRow::MalformedRow(std::size_t row, const std::string& reason)
    : DataError("malformed row " + std::to_string(row) + ": " + reason), row_(row) {}

DuplicateArchetype::DuplicateArchetype(const std::string& code)
    : DataError("duplicate archetype '" + code + "'") {}

NegativeEmission::NegativeEmission(const std::string& code, char stage)
    : DataError("negative stage " + std::string(1, stage) + " emission for '" + code + "'") {}

MissingArchetype::MissingArchetype(const std::string& code)
    : DataError("no emission record for archetype '" + code + "'"), code_(code) {}

SampleTooLarge::SampleTooLarge(std::size_t requested, std::size_t available)
    : DataError("sample exceeds stock (" + std::to_string(requested) + " > " +
                std::to_string(available) + ")") {}

MissingCostEntry::MissingCostEntry(const std::string& entry)
    : DataError("missing cost entry '" + entry + "'") {}

RankDeficient::RankDeficient(std::string column)
    : DataError("design matrix is rank deficient at column '" + column + "'"),
      column_(std::move(column)) {}

EncodingMismatch::EncodingMismatch(const std::string& column)
    : Error("cannot encode model column '" + column + "'") {}

}  // namespace ecosim
