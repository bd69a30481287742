#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cazsl/errors.hpp"

namespace cazsl::csv {

// Splits one CSV line on commas.  No quoting support; the file formats used
// here forbid commas inside fields.
std::vector<std::string> split_line(const std::string& line);

std::string trim(const std::string& s);

// Strict numeric parsing: the whole token must be consumed and the value must
// be finite, otherwise a ParseError pointing at file:line is thrown.
double parse_double(const std::string& token, const std::string& file, std::size_t line);
std::int64_t parse_int(const std::string& token, const std::string& file, std::size_t line);

// Shortest decimal form that round-trips through double.
std::string format_double(double v);

// Reads a whole text file, normalizing CRLF; throws DataError if unreadable.
std::vector<std::string> read_lines(const std::string& path);

// Writes to "<path>.tmp" then renames over path so readers never observe a
// partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string join(const std::vector<std::string>& fields);

}  // namespace cazsl::csv
