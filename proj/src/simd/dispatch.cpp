#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

#include "vegout/simd/kernels.hpp"

namespace vegout::simd {

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t) noexcept;
    double (*squared_distance)(const double*, const double*, std::size_t) noexcept;
    void (*axpy)(double, const double*, double*, std::size_t) noexcept;
    void (*rbf_row)(const double*, const double*, std::size_t, std::size_t, double, double*) noexcept;
};

constexpr Table kScalar{&scalar::dot, &scalar::squared_distance, &scalar::axpy, &scalar::rbf_row};
#if defined(VEGOUT_HAVE_AVX2)
constexpr Table kAvx2{&avx2::dot, &avx2::squared_distance, &avx2::axpy, &avx2::rbf_row};
#endif

const Table& table_for(Isa isa) noexcept {
#if defined(VEGOUT_HAVE_AVX2)
    if (isa == Isa::avx2) return kAvx2;
#endif
    (void)isa;
    return kScalar;
}

Isa initial_isa() noexcept {
    const char* env = std::getenv("VEGOUT_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return detect_isa();
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

const Table& active() noexcept { return table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detect_isa() noexcept {
#if defined(VEGOUT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::avx2;
#endif
    return Isa::scalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) noexcept {
    if (isa == Isa::avx2 && detect_isa() != Isa::avx2) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    assert(a.size() == b.size());
    return active().squared_distance(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void rbf_row(std::span<const double> x, std::span<const double> rows, double gamma, std::span<double> out) noexcept {
    assert(rows.size() == x.size() * out.size());
    active().rbf_row(x.data(), rows.data(), out.size(), x.size(), gamma, out.data());
}

}  // namespace vegout::simd
