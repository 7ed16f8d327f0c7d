#include "vegout/ml/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace vegout::ml {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    m.rows = rows.size();
    m.cols = rows.empty() ? 0 : rows.front().size();
    m.data.reserve(m.rows * m.cols);
    for (const auto& r : rows) {
        if (r.size() != m.cols) throw std::invalid_argument("ragged matrix rows");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
    Matrix m(indices.size(), cols);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), m.row(i).begin());
    }
    return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = at(i, j);
    return c;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset d;
    d.x = x.select_rows(indices);
    d.y.reserve(indices.size());
    for (std::size_t i : indices) d.y.push_back(y[i]);
    d.feature_names = feature_names;
    return d;
}

void Dataset::validate() const {
    if (x.rows != y.size()) throw std::invalid_argument("feature rows and targets differ in length");
    if (!feature_names.empty() && feature_names.size() != x.cols)
        throw std::invalid_argument("feature names do not match column count");
    for (std::size_t i = 0; i < x.data.size(); ++i)
        if (!std::isfinite(x.data[i]))
            throw std::invalid_argument(fmt::format("non-finite feature at row {}, column {}", i / x.cols, i % x.cols));
    for (std::size_t i = 0; i < y.size(); ++i)
        if (!std::isfinite(y[i])) throw std::invalid_argument(fmt::format("non-finite target at row {}", i));
}

Standardizer Standardizer::fit(const Matrix& x) {
    if (x.rows == 0) throw std::invalid_argument("cannot standardize an empty matrix");
    Standardizer s;
    s.mean.assign(x.cols, 0.0);
    s.scale.assign(x.cols, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) s.mean[j] += x.at(i, j);
    for (double& m : s.mean) m /= static_cast<double>(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double d = x.at(i, j) - s.mean[j];
            s.scale[j] += d * d;
        }
    for (double& v : s.scale) {
        v = std::sqrt(v / static_cast<double>(x.rows));
        if (!(v > 1e-12)) v = 1.0;
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
    if (x.cols != mean.size()) throw std::invalid_argument("standardizer column count mismatch");
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) apply_row(x.row(i), out.row(i));
    return out;
}

void Standardizer::apply_row(std::span<const double> in, std::span<double> out) const {
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

TargetScaler TargetScaler::fit(std::span<const double> y) {
    if (y.empty()) throw std::invalid_argument("cannot scale an empty target");
    TargetScaler t;
    for (double v : y) t.mean += v;
    t.mean /= static_cast<double>(y.size());
    double ss = 0.0;
    for (double v : y) ss += (v - t.mean) * (v - t.mean);
    t.scale = std::sqrt(ss / static_cast<double>(y.size()));
    if (!(t.scale > 1e-12)) t.scale = 1.0;
    return t;
}

}  // namespace vegout::ml
