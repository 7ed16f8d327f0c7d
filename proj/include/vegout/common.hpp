#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vegout {

/// Raised for malformed or inconsistent input data. The message carries the
/// file and row context when one is available.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot produce a usable result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calendar month, ordered chronologically.
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    /// Months since 0000-01, handy for cadence arithmetic.
    [[nodiscard]] int index() const noexcept { return year * 12 + (month - 1); }
    [[nodiscard]] static YearMonth from_index(int idx) noexcept {
        const int y = idx >= 0 ? idx / 12 : (idx - 11) / 12;
        return {y, idx - y * 12 + 1};
    }
    [[nodiscard]] YearMonth plus(int months) const noexcept { return from_index(index() + months); }

    [[nodiscard]] std::string str() const;
    /// Parses "YYYY-MM". Throws std::invalid_argument.
    static YearMonth parse(const std::string& text);
};

/// Area index produced by clustering.
using AreaId = int;

}  // namespace vegout
