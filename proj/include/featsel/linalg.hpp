#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace featsel {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::vector<double> column(std::size_t c) const;

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Matrix transposed() const;

    /// Rows in `idx`, in that order.
    Matrix select_rows(std::span<const std::size_t> idx) const;
    /// Columns in `idx`, in that order.
    Matrix select_cols(std::span<const std::size_t> idx) const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

double trace(const Matrix& a);
double max_abs_offdiag(const Matrix& a);

struct SymmetricEigen {
    std::vector<double> values;  ///< descending
    Matrix vectors;              ///< column i pairs with values[i]
    std::size_t sweeps = 0;
};

/// Cyclic Jacobi rotations for a symmetric matrix. Eigenvalues are returned
/// in descending order; each eigenvector is sign-normalized so its
/// largest-magnitude entry is positive. Throws std::runtime_error when the
/// off-diagonal mass fails to vanish within `max_sweeps`.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-14, std::size_t max_sweeps = 100);

/// Lower Cholesky factor, or nullopt if `a` is not numerically positive
/// definite.
std::optional<Matrix> cholesky(const Matrix& a);

/// Solves L x = b for lower-triangular L.
std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b);

/// Inverse of a lower-triangular matrix.
Matrix lower_inverse(const Matrix& lower);

/// Determinant via Gaussian elimination with partial pivoting.
double determinant(Matrix a);

} // namespace featsel
