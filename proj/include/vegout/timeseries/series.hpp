#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "vegout/common.hpp"

namespace vegout::ts {

inline constexpr int kSeasonLength = 12;

/// Monthly series at fixed cadence starting at `start`.
struct MonthlySeries {
    YearMonth start;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] YearMonth month_at(std::size_t i) const noexcept { return start.plus(static_cast<int>(i)); }
    /// First `n` observations.
    [[nodiscard]] MonthlySeries prefix(std::size_t n) const {
        if (n > values.size()) throw std::out_of_range("prefix longer than series");
        return {start, {values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n)}};
    }
};

}  // namespace vegout::ts
