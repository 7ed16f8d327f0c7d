#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace vegout::csv {

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_line(std::string_view line);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view field);

/// Streaming reader with a mandatory header row. Row numbers are 1-based file
/// lines, so row 1 is the header.
class Reader {
public:
    /// Throws DataError when the file cannot be opened or has no header.
    explicit Reader(const std::filesystem::path& path);

    [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
    /// Throws DataError unless the header equals `expected` exactly (after trimming).
    void require_header(const std::vector<std::string>& expected) const;

    /// Reads the next non-blank row; false at end of file.
    bool next(std::vector<std::string>& fields);
    [[nodiscard]] std::size_t row() const noexcept { return line_; }
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::vector<std::string> header_;
    std::size_t line_ = 0;
};

/// Minimal writer; fields are escaped as needed, lines end with '\n'.
class Writer {
public:
    /// Creates parent directories. Throws DataError if the file cannot be opened.
    Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

    void row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

/// Fixed-precision formatting used by every CSV emitter so outputs are
/// byte-stable across runs.
std::string num(double v, int precision = 6);

}  // namespace vegout::csv
