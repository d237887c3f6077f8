#pragma once

// Dense column-major matrix shared by all modules. Working precision is
// std::complex<double>; extended precision is DoubleDouble (real-valued,
// which is all the ground-truth generator needs).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cpfsvd/double_double.hpp"
#include "cpfsvd/error.hpp"

namespace cpfsvd {

using cplx = std::complex<double>;

template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0.0)) {}
    Matrix(size_t rows, size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
    Matrix(std::initializer_list<std::initializer_list<T>> rows)
        : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0), data_(rows_ * cols_)
    {
        size_t i = 0;
        for (const auto& r : rows) {
            require(r.size() == cols_, ErrorCode::dimension_mismatch, "Matrix: ragged initializer");
            size_t j = 0;
            for (const auto& x : r)
                (*this)(i, j++) = x;
            ++i;
        }
    }

    static Matrix identity(size_t n)
    {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i)
            m(i, i) = T(1.0);
        return m;
    }

    static Matrix diagonal(std::span<const T> d)
    {
        Matrix m(d.size(), d.size());
        for (size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(size_t i, size_t j)
    {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }
    const T& operator()(size_t i, size_t j) const
    {
        assert(i < rows_ && j < cols_);
        return data_[j * rows_ + i];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::span<const T> values() const { return data_; }

    std::span<T> column(size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const T> column(size_t j) const { return {data_.data() + j * rows_, rows_}; }

    Matrix block(size_t r0, size_t c0, size_t nr, size_t nc) const
    {
        require(r0 + nr <= rows_ && c0 + nc <= cols_, ErrorCode::dimension_mismatch, "Matrix::block out of range");
        Matrix b(nr, nc);
        for (size_t j = 0; j < nc; ++j)
            for (size_t i = 0; i < nr; ++i)
                b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(size_t r0, size_t c0, const Matrix& b)
    {
        require(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_, ErrorCode::dimension_mismatch,
                "Matrix::set_block out of range");
        for (size_t j = 0; j < b.cols(); ++j)
            for (size_t i = 0; i < b.rows(); ++i)
                (*this)(r0 + i, c0 + j) = b(i, j);
    }

    Matrix& operator+=(const Matrix& b)
    {
        require(rows_ == b.rows_ && cols_ == b.cols_, ErrorCode::dimension_mismatch, "Matrix +=: shape mismatch");
        for (size_t k = 0; k < data_.size(); ++k)
            data_[k] += b.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& b)
    {
        require(rows_ == b.rows_ && cols_ == b.cols_, ErrorCode::dimension_mismatch, "Matrix -=: shape mismatch");
        for (size_t k = 0; k < data_.size(); ++k)
            data_[k] -= b.data_[k];
        return *this;
    }
    Matrix& operator*=(const T& s)
    {
        for (auto& x : data_)
            x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
    friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;
using XMatrix = Matrix<DoubleDouble>;

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& x) { return std::abs(x); }
inline double magnitude(const DoubleDouble& x) { return std::abs(x.to_double()); }

inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline DoubleDouble conj_of(const DoubleDouble& x) { return x; }

} // namespace detail

template <typename T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b)
{
    require(a.cols() == b.rows(), ErrorCode::dimension_mismatch,
            "matrix product: inner dimensions " + std::to_string(a.cols()) + " and " + std::to_string(b.rows()));
    Matrix<T> c(a.rows(), b.cols());
    for (size_t j = 0; j < b.cols(); ++j)
        for (size_t k = 0; k < a.cols(); ++k) {
            const T bkj = b(k, j);
            for (size_t i = 0; i < a.rows(); ++i)
                c(i, j) += a(i, k) * bkj;
        }
    return c;
}

/// Conjugate transpose.
template <typename T>
Matrix<T> adjoint(const Matrix<T>& a)
{
    Matrix<T> t(a.cols(), a.rows());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            t(j, i) = detail::conj_of(a(i, j));
    return t;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a)
{
    Matrix<T> t(a.cols(), a.rows());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            t(j, i) = a(i, j);
    return t;
}

template <typename T>
double max_abs(const Matrix<T>& a)
{
    double m = 0.0;
    for (const auto& x : a.values())
        m = std::max(m, detail::magnitude(x));
    return m;
}

template <typename T>
double norm_fro(const Matrix<T>& a)
{
    double scale = max_abs(a);
    if (scale == 0.0)
        return 0.0;
    double sum = 0.0;
    for (const auto& x : a.values()) {
        double r = detail::magnitude(x) / scale;
        sum += r * r;
    }
    return scale * std::sqrt(sum);
}

/// Block-diagonal concatenation.
template <typename T>
Matrix<T> block_diagonal(std::initializer_list<const Matrix<T>*> blocks)
{
    size_t r = 0, c = 0;
    for (const auto* b : blocks) {
        r += b->rows();
        c += b->cols();
    }
    Matrix<T> m(r, c);
    r = c = 0;
    for (const auto* b : blocks) {
        m.set_block(r, c, *b);
        r += b->rows();
        c += b->cols();
    }
    return m;
}

inline CMatrix to_complex(const RMatrix& a)
{
    CMatrix c(a.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            c(i, j) = a(i, j);
    return c;
}

/// Exact promotion of binary64 entries to extended precision.
inline XMatrix to_extended(const RMatrix& a)
{
    XMatrix x(a.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            x(i, j) = DoubleDouble(a(i, j));
    return x;
}

/// Rounds each entry to the nearest binary64.
inline RMatrix to_working(const XMatrix& a)
{
    RMatrix r(a.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            r(i, j) = a(i, j).to_double();
    return r;
}

inline CMatrix to_working_complex(const XMatrix& a) { return to_complex(to_working(a)); }

inline bool is_real(const CMatrix& a)
{
    return std::all_of(a.values().begin(), a.values().end(), [](const cplx& z) { return z.imag() == 0.0; });
}

inline RMatrix real_part(const CMatrix& a)
{
    RMatrix r(a.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            r(i, j) = a(i, j).real();
    return r;
}

inline RMatrix imag_part(const CMatrix& a)
{
    RMatrix r(a.rows(), a.cols());
    for (size_t j = 0; j < a.cols(); ++j)
        for (size_t i = 0; i < a.rows(); ++i)
            r(i, j) = a(i, j).imag();
    return r;
}

} // namespace cpfsvd
