#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vegout::ml {

/// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {data.data() + i * cols, cols}; }
    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data.data() + i * cols, cols}; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }
    [[nodiscard]] double& at(std::size_t i, std::size_t j) noexcept { return data[i * cols + j]; }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    [[nodiscard]] Matrix select_rows(std::span<const std::size_t> indices) const;
    [[nodiscard]] std::vector<double> column(std::size_t j) const;
};

struct Dataset {
    Matrix x;
    std::vector<double> y;
    std::vector<std::string> feature_names;

    [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
    [[nodiscard]] std::size_t features() const noexcept { return x.cols; }
    [[nodiscard]] Dataset subset(std::span<const std::size_t> indices) const;
    /// Throws std::invalid_argument on shape mismatch or non-finite entries.
    void validate() const;
};

/// Per-column z-scoring with parameters frozen at fit time. Constant columns
/// get a unit scale.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);
    [[nodiscard]] Matrix apply(const Matrix& x) const;
    void apply_row(std::span<const double> in, std::span<double> out) const;
};

/// Scalar z-scoring of the regression target.
struct TargetScaler {
    double mean = 0.0;
    double scale = 1.0;

    static TargetScaler fit(std::span<const double> y);
    [[nodiscard]] double forward(double v) const noexcept { return (v - mean) / scale; }
    [[nodiscard]] double inverse(double z) const noexcept { return z * scale + mean; }
};

}  // namespace vegout::ml
