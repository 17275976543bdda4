#pragma once

#include <string>
#include <string_view>

namespace gplda {

/// Whole-file read; throws Io naming the path.
std::string read_file(const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a half-written file.
void write_file_atomic(const std::string& path, std::string_view content);

/// Shortest "%.17g" text; reads back to the identical double.
std::string format_double(double v);

/// Strict full-string parse (surrounding blanks allowed). Throws Parse with
/// `what` in the message.
double parse_double(std::string_view text, const std::string& what);
long long parse_integer(std::string_view text, const std::string& what);

std::string_view trim(std::string_view s);

}  // namespace gplda
