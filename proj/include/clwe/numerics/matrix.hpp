#pragma once

#include "clwe/error.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace clwe {

template <class T>
using Vector = std::vector<T>;

// Dense row-major matrix. Lattice bases store basis vectors as columns.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ParameterError("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix from_columns(const std::vector<Vector<T>>& columns) {
        if (columns.empty()) return {};
        Matrix m(columns.front().size(), columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Vector<T> column(std::size_t j) const {
        Vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_column(std::size_t j, const Vector<T>& c) {
        if (c.size() != rows_) throw ParameterError("column length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    void swap_columns(std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    const std::vector<T>& data() const { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw ParameterError("matrix product dimension mismatch");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

template <class T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
    if (a.cols() != x.size()) throw ParameterError("matrix-vector dimension mismatch");
    Vector<T> y(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

template <class U, class T>
Matrix<U> convert(const Matrix<T>& m) {
    Matrix<U> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = static_cast<U>(m(i, j));
    return out;
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
    T s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
    return dot(std::span<const T>(a), std::span<const T>(b));
}

template <class T>
T norm_squared(const Vector<T>& a) {
    return dot(a, a);
}

template <class T>
Vector<T> operator+(Vector<T> a, const Vector<T>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

template <class T>
Vector<T> operator-(Vector<T> a, const Vector<T>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

template <class T>
Vector<T> scaled(Vector<T> a, const T& s) {
    for (auto& v : a) v *= s;
    return a;
}

// Gaussian elimination with partial pivoting. Works for double and Real.
template <class T>
class PivotedLu {
public:
    explicit PivotedLu(Matrix<T> a) : lu_(std::move(a)), perm_(lu_.rows()) {
        if (!lu_.square()) throw ParameterError("LU needs a square matrix");
        const std::size_t n = lu_.rows();
        for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            T best = abs_value(lu_(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                T v = abs_value(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == T(0)) {
                singular_ = true;
                continue;
            }
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(perm_[k], perm_[p]);
                sign_ = -sign_;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const T f = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    bool singular() const { return singular_; }

    T determinant() const {
        T d(sign_);
        for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
        return d;
    }

    // Smallest |pivot| relative to the largest; a cheap conditioning signal.
    T pivot_ratio() const {
        T lo = abs_value(lu_(0, 0)), hi = lo;
        for (std::size_t i = 1; i < lu_.rows(); ++i) {
            T v = abs_value(lu_(i, i));
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        return hi == T(0) ? T(0) : T(lo / hi);
    }

    Vector<T> solve(const Vector<T>& b) const {
        if (singular_) throw SingularMatrixError("linear system is singular");
        const std::size_t n = lu_.rows();
        Vector<T> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            T s = b[perm_[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
            x[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            T s = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
            x[ii] = s / lu_(ii, ii);
        }
        return x;
    }

    Matrix<T> inverse() const {
        const std::size_t n = lu_.rows();
        Matrix<T> inv(n, n);
        Vector<T> e(n, T(0));
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), T(0));
            e[j] = T(1);
            inv.set_column(j, solve(e));
        }
        return inv;
    }

private:
    static T abs_value(const T& v) { return v < T(0) ? T(-v) : v; }

    Matrix<T> lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
};

template <class T>
T determinant(const Matrix<T>& a) {
    return PivotedLu<T>(a).determinant();
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
    PivotedLu<T> lu(a);
    if (lu.singular()) throw SingularMatrixError("matrix is singular");
    return lu.inverse();
}

template <class T>
Vector<T> solve(const Matrix<T>& a, const Vector<T>& b) {
    return PivotedLu<T>(a).solve(b);
}

// Gram-Schmidt data of the columns b_0..b_{n-1}: mu(i, j) = <b_i, b*_j>/|b*_j|^2
// for j < i and bstar_norm2[j] = |b*_j|^2.
template <class T>
struct GramSchmidt {
    Matrix<T> mu;
    Vector<T> bstar_norm2;
    Matrix<T> bstar;  // orthogonalized vectors as columns
};

template <class T>
GramSchmidt<T> gram_schmidt(const Matrix<T>& basis) {
    const std::size_t n = basis.cols();
    GramSchmidt<T> gs{Matrix<T>::identity(n), Vector<T>(n, T(0)), basis};
    for (std::size_t i = 0; i < n; ++i) {
        Vector<T> bi = basis.column(i);
        Vector<T> bs = bi;
        for (std::size_t j = 0; j < i; ++j) {
            Vector<T> bj = gs.bstar.column(j);
            T m = dot(bi, bj) / gs.bstar_norm2[j];
            gs.mu(i, j) = m;
            for (std::size_t k = 0; k < bs.size(); ++k) bs[k] -= m * bj[k];
        }
        gs.bstar.set_column(i, bs);
        gs.bstar_norm2[i] = norm_squared(bs);
    }
    return gs;
}

}  // namespace clwe
