#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ecomplex {

/// Minimal RFC-4180-style CSV reader: quoted fields (embedded commas,
/// doubled quotes, newlines), CR/LF line endings, and '#'-prefixed comment
/// lines skipped outside of quotes. Our own outputs start with a
/// '# config_hash=' line, so readers must tolerate comments.
class CsvReader {
  public:
    explicit CsvReader(std::istream &in) : in_(in) {}

    /// Reads the next record into `fields`. Returns false at end of input.
    bool next_row(std::vector<std::string> &fields);

    /// 1-based line number where the last record started.
    std::size_t line_number() const { return row_start_line_; }

  private:
    std::istream &in_;
    std::size_t line_ = 0;
    std::size_t row_start_line_ = 0;
};

/// Joins fields into one CSV line (no trailing newline), quoting only when
/// needed.
std::string csv_join(const std::vector<std::string> &fields);

/// Shortest round-trip decimal rendering of a double (via to_chars);
/// deterministic across runs.
std::string format_double(double v);

} // namespace ecomplex
