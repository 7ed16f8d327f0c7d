#pragma once

// Dense inner loops shared by the regressors: dot products, squared distances,
// axpy updates and RBF kernel rows. Each kernel has a scalar reference version
// and, on x86-64, an AVX2+FMA version. The variant is chosen once at first use
// from CPUID; `VEGOUT_SIMD=scalar` in the environment pins the scalar path.

#include <cstddef>
#include <span>
#include <string_view>

namespace vegout::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU and build.
Isa detect_isa() noexcept;
/// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;
/// Overrides dispatch (tests). Requesting an unsupported variant falls back to scalar.
void set_isa(Isa isa) noexcept;

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void rbf_row(const double* x, const double* rows, std::size_t count, std::size_t dim, double gamma,
             double* out) noexcept;
}  // namespace scalar

#if defined(VEGOUT_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
double squared_distance(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
void rbf_row(const double* x, const double* rows, std::size_t count, std::size_t dim, double gamma,
             double* out) noexcept;
}  // namespace avx2
#endif

// Dispatching entry points. Spans must have equal extents where paired.

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;
/// out[j] = exp(-gamma * |x - rows[j]|^2) for `out.size()` row-major rows of width x.size().
void rbf_row(std::span<const double> x, std::span<const double> rows, double gamma, std::span<double> out) noexcept;

}  // namespace vegout::simd
