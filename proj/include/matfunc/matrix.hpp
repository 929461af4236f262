#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "matfunc/errors.hpp"

namespace matfunc {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Tolerances shared across the library.  The defaults leave double-precision
// headroom at desk scale (k <= 32).
struct ToleranceConfig {
    double cluster_tol = 1e-8;   // eigenvalue clustering radius
    double zero_tol = 1e-10;     // norm threshold for "is zero matrix"
    double cond_max = 1e8;       // maximum accepted eigenvector-matrix condition
    double rel_tol = 1e-9;       // generic relative comparison tolerance

    void validate() const {
        if (!(cluster_tol > 0) || !(zero_tol > 0) || !(cond_max > 0) || !(rel_tol > 0))
            raise_error("InvalidArgument", "tolerances must be strictly positive");
        if (cluster_tol < zero_tol)
            raise_error("InvalidArgument", "cluster_tol must be >= zero_tol");
    }
};

// Dense square complex matrix, row-major.
class MatrixC {
public:
    MatrixC() : dim_(0) {}

    explicit MatrixC(std::size_t dim) : dim_(dim), a_(dim * dim, Complex(0.0, 0.0)) {
        if (dim == 0) raise_error("InvalidArgument", "matrix dimension must be >= 1");
    }

    MatrixC(std::size_t dim, std::vector<Complex> entries) : dim_(dim), a_(std::move(entries)) {
        if (dim == 0) raise_error("InvalidArgument", "matrix dimension must be >= 1");
        if (a_.size() != dim * dim)
            raise_error("InvalidArgument", "entry count does not match dimension");
        for (const Complex& z : a_)
            if (!is_finite(z)) raise_error("InvalidArgument", "matrix entries must be finite");
    }

    MatrixC(std::initializer_list<std::initializer_list<Complex>> rows) {
        dim_ = rows.size();
        if (dim_ == 0) raise_error("InvalidArgument", "matrix dimension must be >= 1");
        a_.reserve(dim_ * dim_);
        for (const auto& r : rows) {
            if (r.size() != dim_) raise_error("InvalidArgument", "matrix rows must be square");
            for (Complex z : r) {
                if (!is_finite(z)) raise_error("InvalidArgument", "matrix entries must be finite");
                a_.push_back(z);
            }
        }
    }

    static MatrixC identity(std::size_t dim) {
        MatrixC m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static MatrixC diagonal(const std::vector<Complex>& d) {
        MatrixC m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    const std::vector<Complex>& data() const { return a_; }

    bool finite() const {
        for (const Complex& z : a_)
            if (!is_finite(z)) return false;
        return true;
    }

    MatrixC& operator+=(const MatrixC& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    MatrixC& operator-=(const MatrixC& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    MatrixC& operator*=(Complex c) {
        for (Complex& z : a_) z *= c;
        return *this;
    }

    friend MatrixC operator+(MatrixC a, const MatrixC& b) { return a += b; }
    friend MatrixC operator-(MatrixC a, const MatrixC& b) { return a -= b; }
    friend MatrixC operator*(Complex c, MatrixC a) { return a *= c; }
    friend MatrixC operator*(MatrixC a, Complex c) { return a *= c; }

    friend MatrixC operator*(const MatrixC& a, const MatrixC& b) {
        const std::size_t n = a.dim_;
        MatrixC r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                const Complex ail = a(i, l);
                if (ail == Complex(0.0, 0.0)) continue;
                for (std::size_t j = 0; j < n; ++j) r(i, j) += ail * b(l, j);
            }
        return r;
    }

    MatrixC conj_transpose() const {
        MatrixC r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

private:
    std::size_t dim_;
    std::vector<Complex> a_;
};

// Solve A x = b by Gaussian elimination with partial pivoting.
// B holds one column per right-hand side (as a MatrixC of the same dim).
inline MatrixC lu_solve(MatrixC a, MatrixC b) {
    const std::size_t n = a.dim();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) raise_error("SingularMatrix", "pivot vanished during elimination");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(b(col, j), b(piv, j));
            }
        }
        const Complex d = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a(r, col) / d;
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            for (std::size_t j = 0; j < n; ++j) b(r, j) -= f * b(col, j);
        }
    }
    // back substitution
    for (std::size_t col = n; col-- > 0;) {
        const Complex d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) b(col, j) /= d;
        for (std::size_t r = 0; r < col; ++r) {
            const Complex f = a(r, col);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) b(r, j) -= f * b(col, j);
        }
    }
    return b;
}

inline MatrixC inverse(const MatrixC& a) { return lu_solve(a, MatrixC::identity(a.dim())); }

// Horner evaluation of a polynomial at a matrix; coeffs constant term first.
inline MatrixC mat_poly_eval(const std::vector<Complex>& coeffs, const MatrixC& a) {
    if (coeffs.empty()) raise_error("InvalidArgument", "mat_poly_eval needs at least one coefficient");
    const std::size_t n = a.dim();
    MatrixC r(n);
    for (std::size_t i = 0; i < n; ++i) r(i, i) = coeffs.back();
    for (std::size_t idx = coeffs.size() - 1; idx-- > 0;) {
        r = r * a;
        for (std::size_t i = 0; i < n; ++i) r(i, i) += coeffs[idx];
    }
    return r;
}

}  // namespace matfunc
