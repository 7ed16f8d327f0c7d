#pragma once

#include <span>

namespace vegout {

struct NmaeResult {
    double value = 0.0;
    double denominator = 1.0;
    bool degenerate_range = false;  // actual range was zero; denominator replaced by max(1, value)
};

/// Mean absolute error normalised by the range of `actual`.
/// Throws std::invalid_argument on empty or mismatched input.
NmaeResult nmae_detail(std::span<const double> predicted, std::span<const double> actual);

inline double nmae(std::span<const double> predicted, std::span<const double> actual) {
    return nmae_detail(predicted, actual).value;
}

}  // namespace vegout
