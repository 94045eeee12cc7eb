#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace tierlab {

// Splits one CSV line on commas. No quoting support: none of the file formats
// here carry embedded commas. Fields are whitespace-trimmed.
std::vector<std::string> split_csv(const std::string& line);

// Reads the first meaningful line, skipping blanks and '#' comments so data
// files may open with a comment block. Bumps line_no once per physical line
// consumed; returns false at end of input.
bool read_header(std::istream& in, std::string& line, std::size_t& line_no);

std::string trim(const std::string& s);

// Reads a whole text file, normalizing CRLF. Throws BadFile.
std::string slurp(const std::string& path);

// Writes content to path atomically: writes "<path>.tmp" then renames, so a
// crash never leaves a partial file. Newlines are '\n', encoding UTF-8.
void write_atomic(const std::string& path, const std::string& content);

// Resolves a bundled data file: absolute/relative paths with a separator are
// used as-is, bare names are looked up under $TIERLAB_DATA_DIR (falling back
// to "./data").
std::string resolve_data_path(const std::string& name);

}  // namespace tierlab
