#include "rfmseg/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace rfmseg {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> v;
    for (const auto& r : rows) v.emplace_back(r);
    return from_rows(v);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

double Matrix::norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double distance(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared_distance(a, b)); }

void FeatureMatrix::validate() const {
    if (data.rows() == 0 || data.cols() == 0) throw std::invalid_argument("feature matrix must have n >= 1 and d >= 1");
    if (!column_names.empty() && column_names.size() != data.cols()) {
        throw std::invalid_argument("column name count does not match matrix width");
    }
    if (!row_ids.empty() && row_ids.size() != data.rows()) {
        throw std::invalid_argument("row id count does not match matrix height");
    }
    for (double v : data.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("feature matrix contains a non-finite value");
    }
}

FeatureMatrix make_feature_matrix(Matrix data, std::vector<std::string> column_names) {
    FeatureMatrix fm;
    if (column_names.empty()) {
        for (std::size_t c = 0; c < data.cols(); ++c) column_names.push_back("x" + std::to_string(c));
    }
    fm.data = std::move(data);
    fm.column_names = std::move(column_names);
    return fm;
}

std::string to_string(ScalingKind kind) {
    switch (kind) {
        case ScalingKind::MinMax: return "minmax";
        case ScalingKind::ZScore: return "zscore";
        case ScalingKind::Raw: break;
    }
    return "raw";
}

}  // namespace rfmseg
