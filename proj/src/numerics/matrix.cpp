//------------------------------------------------------------------------------
//
//   Copyright 2026 The FHNN Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "numerics/matrix.hpp"

#include "numerics/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fhnn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
    if (!std::isfinite(fill))
        throw NumericError("Matrix fill value is not finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows * cols)
        throw ShapeError("Matrix data length " + std::to_string(data_.size()) + " does not match " +
                         shape_string());
    require_finite(*this, "Matrix data");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ShapeError("Matrix::from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
}

Matrix Matrix::column(std::span<const double> values)
{
    return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

void Matrix::fill(double value)
{
    if (!std::isfinite(value))
        throw NumericError("Matrix fill value is not finite");
    std::fill(data_.begin(), data_.end(), value);
}

std::string Matrix::shape_string() const
{
    return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

Matrix matmul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw ShapeError("matmul: shape mismatch " + a.shape_string() + " * " + b.shape_string());
    require_finite(a, "matmul lhs");
    require_finite(b, "matmul rhs");

    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* out_row = out.data() + i * b.cols();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const double* b_row = b.data() + k * b.cols();
            for (std::size_t j = 0; j < b.cols(); ++j)
                out_row[j] += aik * b_row[j];
        }
    }
    require_finite(out, "matmul result");
    return out;
}

Matrix transpose(const Matrix& a)
{
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(j, i) = a(i, j);
    return out;
}

bool all_finite(std::span<const double> values) noexcept
{
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_finite(const Matrix& m, const std::string& what)
{
    if (!all_finite(m))
        throw NumericError(what + " contains non-finite entries");
}

} // namespace fhnn
