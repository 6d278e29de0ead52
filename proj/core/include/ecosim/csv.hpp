#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ecosim::csv {

// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
// A leading UTF-8 byte order mark is skipped.
class Reader {
public:
    explicit Reader(std::istream& in);

    // Reads the next record into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // Number of records returned so far.
    std::size_t records_read() const noexcept { return records_; }

private:
    std::istream& in_;
    std::size_t records_ = 0;
    bool started_ = false;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

std::string_view trim(std::string_view text);

// Writes one field, quoting it when it contains a delimiter, quote or newline.
void write_field(std::ostream& out, std::string_view field);
void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace ecosim::csv
