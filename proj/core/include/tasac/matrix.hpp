#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace tasac {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    std::size_t size() const { return data.size(); }

    void fill(double v) { data.assign(data.size(), v); }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline bool all_finite(const Matrix& m) { return all_finite(m.data); }

}  // namespace tasac
