#include "vegout/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vegout {

NmaeResult nmae_detail(std::span<const double> predicted, std::span<const double> actual) {
    if (actual.empty()) throw std::invalid_argument("nmae: no months to score");
    if (predicted.size() != actual.size()) throw std::invalid_argument("nmae: length mismatch");
    const auto [lo, hi] = std::minmax_element(actual.begin(), actual.end());
    NmaeResult r;
    r.denominator = *hi - *lo;
    if (r.denominator <= 0.0) {
        r.denominator = std::max(1.0, *hi);
        r.degenerate_range = true;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(predicted[i] - actual[i]);
    r.value = sum / static_cast<double>(actual.size()) / r.denominator;
    return r;
}

}  // namespace vegout
