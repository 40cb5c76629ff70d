#ifndef PVRING_MATRIX_HPP
#define PVRING_MATRIX_HPP

#include "pvring/basefield.hpp"
#include "pvring/errors.hpp"

#include <functional>
#include <vector>

namespace pvring {

/// Small dense matrix over an exact ring element type.
template <class T>
class Matrix {
  public:
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (!rows || !cols) throw usage_error("empty matrix");
    }

    static Matrix identity(std::size_t n, const T& one, const T& zero) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw usage_error("matrix product shape mismatch");
        T zero = data_[0] - data_[0];
        Matrix r(rows_, o.cols_, zero);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k)
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        check_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] - o.data_[i];
        return r;
    }

    Matrix map(const std::function<T(const T&)>& fn) const {
        Matrix r = *this;
        for (auto& v : r.data_) v = fn(v);
        return r;
    }

    T trace() const {
        if (rows_ != cols_) throw usage_error("trace of a non-square matrix");
        T s = at(0, 0);
        for (std::size_t i = 1; i < rows_; ++i) s = s + at(i, i);
        return s;
    }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (auto& v : data_)
            if (!v.is_zero()) return false;
        return true;
    }

  private:
    void check_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw usage_error("matrix shape mismatch");
    }
    std::size_t rows_, cols_;
    std::vector<T> data_;
};

using KMatrix = Matrix<RationalFunction>;

/// Exact determinant over K via fraction-free Bareiss elimination on the
/// denominator-cleared polynomial matrix.
RationalFunction kmatrix_det(const KMatrix& A);

/// Exact inverse (adjugate over Bareiss minors divided by the determinant).
/// Throws domain_error when the matrix is singular.
KMatrix kmatrix_inverse(const KMatrix& A);

/// Entrywise operator application.
KMatrix kmatrix_apply(const OperatorSpec& op, const KMatrix& A);

} // namespace pvring

#endif
