#include <cmath>

#include "vegout/simd/kernels.hpp"

namespace vegout::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void rbf_row(const double* x, const double* rows, std::size_t count, std::size_t dim, double gamma,
             double* out) noexcept {
    for (std::size_t j = 0; j < count; ++j) out[j] = std::exp(-gamma * squared_distance(x, rows + j * dim, dim));
}

}  // namespace vegout::simd::scalar
