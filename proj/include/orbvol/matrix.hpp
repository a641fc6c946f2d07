#pragma once

#include "orbvol/errors.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace orbvol {

// Dense row-major matrix over any commutative ring with value semantics.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const {
        Matrix t(cols_, rows_, data_.empty() ? T{} : data_.front());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    template <class F>
    auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
        using U = decltype(f(std::declval<const T&>()));
        Matrix<U> out;
        out.rows_ = rows_;
        out.cols_ = cols_;
        out.data_.reserve(data_.size());
        for (const auto& v : data_) out.data_.push_back(f(v));
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_shape(b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_shape(b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
        return c;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionError("matrix product: dimension mismatch");
        if (a.rows_ == 0 || b.cols_ == 0 || a.cols_ == 0) throw PreconditionError("matrix product: empty operand");
        Matrix c(a.rows_, b.cols_, a(0, 0) - a(0, 0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    const std::vector<T>& data() const { return data_; }

private:
    template <class U>
    friend class Matrix;
    void check_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw PreconditionError("matrix shapes differ");
    }
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

// Characteristic polynomial det(lambda*I - A), constant-first, monic, by the
// division-free Berkowitz recursion. `one` fixes the ring.
template <class T>
std::vector<T> charpoly_berkowitz(const Matrix<T>& a, const T& one) {
    if (!a.square()) throw PreconditionError("characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    const T zero = one - one;
    if (n == 0) return {one};
    std::vector<T> poly{one, -a(0, 0)}; // highest degree first
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<T> t(r + 2, zero);
        t[0] = one;
        t[1] = -a(r, r);
        std::vector<T> v(r, zero);
        for (std::size_t i = 0; i < r; ++i) v[i] = a(i, r);
        for (std::size_t k = 2; k <= r + 1; ++k) {
            T dot = zero;
            for (std::size_t i = 0; i < r; ++i) dot += a(r, i) * v[i];
            t[k] = -dot;
            if (k == r + 1) break;
            std::vector<T> w(r, zero);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) w[i] += a(i, j) * v[j];
            v = std::move(w);
        }
        std::vector<T> next(r + 2, zero);
        for (std::size_t i = 0; i < r + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += t[i - j] * poly[j];
        poly = std::move(next);
    }
    return std::vector<T>(poly.rbegin(), poly.rend());
}

template <class T>
T determinant(const Matrix<T>& a, const T& one) {
    auto cp = charpoly_berkowitz(a, one);
    return a.rows() % 2 == 0 ? cp.front() : -cp.front();
}

template <class T>
Matrix<T> identity(std::size_t n, const T& one) {
    Matrix<T> m(n, n, one - one);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
}

// Inverse over a field by Gauss-Jordan elimination; throws on a singular matrix.
template <class T>
Matrix<T> inverse(Matrix<T> a, const T& one) {
    if (!a.square()) throw PreconditionError("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    const T zero = one - one;
    Matrix<T> inv = identity(n, one);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == zero) ++piv;
        if (piv == n) throw PreconditionError("singular matrix");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(col, j), a(piv, j));
            std::swap(inv(col, j), inv(piv, j));
        }
        const T s = one / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) * s;
            inv(col, j) = inv(col, j) * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == zero) continue;
            const T f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = a(i, j) - f * a(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

} // namespace orbvol
