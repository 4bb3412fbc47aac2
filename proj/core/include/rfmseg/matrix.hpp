#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rfmseg {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<double> column(std::size_t c) const;

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transpose() const;
    Matrix operator*(const Matrix& rhs) const;

    /// Frobenius norm.
    double norm() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

enum class ScalingKind { Raw, MinMax, ZScore };

/// Per-column affine map x' = (x - offset) / scale. A zero scale marks a
/// constant column, which maps to 0.
struct Scaling {
    ScalingKind kind = ScalingKind::Raw;
    std::vector<double> offset;
    std::vector<double> scale;
};

/// The n x d numeric table passed between pipeline stages.
struct FeatureMatrix {
    Matrix data;
    std::vector<std::string> column_names;
    /// Stable identifiers of the rows (customer or invoice ids); may be empty.
    std::vector<std::string> row_ids;
    Scaling scaling;

    std::size_t rows() const { return data.rows(); }
    std::size_t cols() const { return data.cols(); }

    /// Throws std::invalid_argument on empty shape, non-finite entries or
    /// inconsistent names.
    void validate() const;
};

FeatureMatrix make_feature_matrix(Matrix data, std::vector<std::string> column_names = {});

std::string to_string(ScalingKind kind);

}  // namespace rfmseg
