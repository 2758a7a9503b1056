#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdgafs {

/// Raised when an input file cannot be parsed (bad cell, arity mismatch, ...).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a value or argument violates a documented contract.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles. Sized for this toolkit's workloads
/// (pattern matrices of a few thousand rows, weight matrices up to ~100x100).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_.data() + r * cols_, cols_);
    }
    std::span<double> row(std::size_t r) {
        return std::span<double>(data_.data() + r * cols_, cols_);
    }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double mean_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Population standard deviation (divide by n).
inline double population_std(std::span<const double> v, double mu) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) {
        const double d = x - mu;
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

inline double population_std(std::span<const double> v) {
    return population_std(v, mean_of(v));
}

/// Logistic squashing 1/(1+exp(-z)), kept strictly inside (0,1) so that
/// extreme z-scores cannot round onto the interval endpoints.
inline double sigmoid01(double z) {
    double y = 1.0 / (1.0 + std::exp(-z));
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    if (y <= 0.0) y = lo;
    if (y >= 1.0) y = hi;
    return y;
}

/// Softmax scaling of a value set: each value v maps to
/// sigmoid((v - mean) / std). A degenerate set (std == 0) maps to all 0.5.
inline std::vector<double> softmax_scaled(std::span<const double> values) {
    const double mu = mean_of(values);
    const double sigma = population_std(values, mu);
    std::vector<double> out(values.size());
    if (sigma == 0.0) {
        for (auto& y : out) y = 0.5;
        return out;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = sigmoid01((values[i] - mu) / sigma);
    }
    return out;
}

/// Shortest round-trip decimal form of a double; identical bytes on every
/// platform for the same value, which the reproducibility contracts rely on.
inline std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, end);
}

inline bool is_missing_value(double x) { return std::isnan(x); }

constexpr double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

} // namespace cdgafs
