#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "matfunc/matrix.hpp"

namespace matfunc {

// A = Q T Q^H with T upper triangular (complex Schur form).
struct SchurForm {
    MatrixC t;
    MatrixC q;
};

struct EigenDecomposition {
    std::vector<Complex> values;     // full multiset, algebraic multiplicity
    bool vectors_present = false;    // true iff a full eigenbasis with cond <= cond_max
    MatrixC vectors;                 // columns are eigenvectors when present
    double cond_estimate = std::numeric_limits<double>::infinity();
};

namespace detail {

struct Givens {
    Complex c;
    Complex s;
};

}  // namespace detail

// Householder reduction to upper Hessenberg form, accumulating the unitary
// similarity: A = Q H Q^H.
inline void hessenberg(const MatrixC& a, MatrixC& h, MatrixC& q) {
    const std::size_t n = a.dim();
    h = a;
    q = MatrixC::identity(n);
    if (n < 3) return;
    for (std::size_t col = 0; col + 2 < n; ++col) {
        // Householder vector for h(col+1..n-1, col)
        double norm2 = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) norm2 += std::norm(h(i, col));
        const double alpha = std::sqrt(norm2);
        if (alpha == 0.0) continue;
        Complex x0 = h(col + 1, col);
        Complex phase = (std::abs(x0) == 0.0) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
        Complex v0 = x0 + phase * alpha;
        std::vector<Complex> v(n, Complex(0.0, 0.0));
        v[col + 1] = v0;
        double vnorm2 = std::norm(v0);
        for (std::size_t i = col + 2; i < n; ++i) {
            v[i] = h(i, col);
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // H <- (I - beta v v^H) H
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot = 0.0;
            for (std::size_t i = col + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= beta;
            for (std::size_t i = col + 1; i < n; ++i) h(i, j) -= dot * v[i];
        }
        // H <- H (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = col + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
        // Q <- Q (I - beta v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) dot += q(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = col + 1; j < n; ++j) q(i, j) -= dot * std::conj(v[j]);
        }
        for (std::size_t i = col + 2; i < n; ++i) h(i, col) = 0.0;
    }
}

namespace detail {

// Apply G^H from the left on rows (p, p+1), columns [jmin, n).
inline void rotate_rows(MatrixC& m, std::size_t p, const Givens& g, std::size_t jmin) {
    const std::size_t n = m.dim();
    for (std::size_t j = jmin; j < n; ++j) {
        const Complex x = m(p, j), y = m(p + 1, j);
        m(p, j) = std::conj(g.c) * x + std::conj(g.s) * y;
        m(p + 1, j) = -g.s * x + g.c * y;
    }
}

// Apply G from the right on columns (p, p+1), rows [0, imax), where
// G = [[c, -conj(s)], [s, conj(c)]] is the unitary with G^H (a,b)^T = (r,0)^T.
inline void rotate_cols(MatrixC& m, std::size_t p, const Givens& g, std::size_t imax) {
    for (std::size_t i = 0; i < imax; ++i) {
        const Complex x = m(i, p), y = m(i, p + 1);
        m(i, p) = g.c * x + g.s * y;
        m(i, p + 1) = -std::conj(g.s) * x + std::conj(g.c) * y;
    }
}

inline Givens givens_for(Complex a, Complex b) {
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
    const double scale = std::max(na, nb);
    const double ra = na / scale, rb = nb / scale;
    const double r = scale * std::sqrt(ra * ra + rb * rb);
    return {a / r, b / r};
}

// Triangularize the 2x2 block at (p, p) of T by a unitary similarity,
// accumulating into Q.  Eigenvalues via the quadratic formula.
inline void resolve_2x2(MatrixC& t, MatrixC& q, std::size_t p) {
    const Complex a = t(p, p), b = t(p, p + 1), c = t(p + 1, p), d = t(p + 1, p + 1);
    if (std::abs(c) == 0.0) return;
    const Complex m = 0.5 * (a + d);
    const Complex disc = std::sqrt(m * m - (a * d - b * c));
    Complex l1 = m + disc, l2 = m - disc;
    if (std::abs(l1 - a) + std::abs(l1 - d) < std::abs(l2 - a) + std::abs(l2 - d)) std::swap(l1, l2);
    // eigenvector for l1
    Complex v0, v1;
    if (std::abs(c) >= std::abs(b)) {
        v0 = l1 - d;
        v1 = c;
    } else {
        v0 = b;
        v1 = l1 - a;
    }
    if (std::abs(v0) == 0.0 && std::abs(v1) == 0.0) {
        v0 = 1.0;
        v1 = 0.0;
    }
    // Rotation G with G^H v proportional to e1: pick c = v0/|v|, s = v1/|v|.
    const Givens g = givens_for(v0, v1);
    rotate_rows(t, p, g, 0);
    rotate_cols(t, p, g, t.dim());
    rotate_cols(q, p, g, q.dim());
    t(p + 1, p) = 0.0;
}

}  // namespace detail

// Complex Schur decomposition by single-shift QR iteration with Wilkinson
// shifts and occasional exceptional shifts.  Throws NoConvergence when the
// iteration budget is exhausted.
inline SchurForm schur(const MatrixC& a) {
    const std::size_t n = a.dim();
    SchurForm s;
    hessenberg(a, s.t, s.q);
    MatrixC& t = s.t;
    MatrixC& q = s.q;
    if (n == 1) return s;

    const double ulp = std::numeric_limits<double>::epsilon();
    double hnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = (i == 0 ? 0 : i - 1); j < n; ++j) hnorm += std::abs(t(i, j));
    if (hnorm == 0.0) return s;

    std::size_t hi = n - 1;
    std::size_t iter = 0;
    const std::size_t max_total = 60 * n * n + 200;
    std::size_t block_iter = 0;

    while (true) {
        // deflate converged subdiagonal entries
        for (std::size_t m = 1; m <= hi; ++m) {
            double thr = ulp * (std::abs(t(m - 1, m - 1)) + std::abs(t(m, m)));
            if (thr == 0.0) thr = ulp * hnorm;
            if (std::abs(t(m, m - 1)) <= thr) t(m, m - 1) = 0.0;
        }
        while (hi > 0 && std::abs(t(hi, hi - 1)) == 0.0) {
            --hi;
            block_iter = 0;
        }
        if (hi == 0) break;

        std::size_t lo = hi;
        while (lo > 0 && std::abs(t(lo, lo - 1)) != 0.0) --lo;

        if (hi - lo == 1) {
            detail::resolve_2x2(t, q, lo);
            block_iter = 0;
            continue;
        }

        if (++iter > max_total)
            raise_error("NoConvergence", "QR iteration exhausted its budget");
        ++block_iter;

        // shift
        Complex mu;
        if (block_iter % 12 == 0) {
            // exceptional shift, breaks symmetric stalls
            mu = t(hi, hi) + Complex(0.75 * std::abs(t(hi, hi - 1)), 0.0);
        } else {
            const Complex a11 = t(hi - 1, hi - 1), a12 = t(hi - 1, hi);
            const Complex a21 = t(hi, hi - 1), a22 = t(hi, hi);
            const Complex m = 0.5 * (a11 + a22);
            const Complex disc = std::sqrt(m * m - (a11 * a22 - a12 * a21));
            const Complex l1 = m + disc, l2 = m - disc;
            mu = (std::abs(l1 - a22) < std::abs(l2 - a22)) ? l1 : l2;
        }

        // implicit single-shift sweep on [lo, hi]
        Complex x = t(lo, lo) - mu;
        Complex y = t(lo + 1, lo);
        for (std::size_t p = lo; p < hi; ++p) {
            const detail::Givens g = detail::givens_for(x, y);
            detail::rotate_rows(t, p, g, (p == 0 ? 0 : p - 1));
            detail::rotate_cols(t, p, g, std::min(n, p + 3));
            detail::rotate_cols(q, p, g, n);
            if (p + 1 < hi) {
                x = t(p + 1, p);
                y = t(p + 2, p);
            }
        }
    }
    return s;
}

inline std::vector<Complex> eigenvalues(const MatrixC& a) {
    const SchurForm s = schur(a);
    std::vector<Complex> v(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) v[i] = s.t(i, i);
    return v;
}

// Spectral norm (largest singular value) via the dominant eigenvalue of
// A^H A; closed form for 1x1.
inline double op_norm(const MatrixC& a) {
    if (a.dim() == 1) return std::abs(a(0, 0));
    const double scale = a.max_abs();
    if (scale == 0.0) return 0.0;
    MatrixC b = a;
    b *= Complex(1.0 / scale, 0.0);
    const MatrixC g = b.conj_transpose() * b;
    double lmax = 0.0;
    for (Complex z : eigenvalues(g)) lmax = std::max(lmax, z.real());
    return scale * std::sqrt(std::max(0.0, lmax));
}

// All singular values, descending.
inline std::vector<double> singular_values(const MatrixC& a) {
    const std::size_t n = a.dim();
    const double scale = a.max_abs();
    if (scale == 0.0) return std::vector<double>(n, 0.0);
    MatrixC b = a;
    b *= Complex(1.0 / scale, 0.0);
    const MatrixC g = b.conj_transpose() * b;
    std::vector<double> s;
    s.reserve(n);
    for (Complex z : eigenvalues(g)) s.push_back(scale * std::sqrt(std::max(0.0, z.real())));
    std::sort(s.rbegin(), s.rend());
    return s;
}

// Rank by singular-value thresholding against an absolute reference.
inline std::size_t rank_with_threshold(const MatrixC& a, double threshold) {
    std::size_t r = 0;
    for (double s : singular_values(a))
        if (s > threshold) ++r;
    return r;
}

// Smallest p <= k with ||(A - lambda I)^p|| <= zero_tol * max(1, ||A - lambda I||)^p,
// or nullopt if no power vanishes.
inline std::optional<std::size_t> nilpotency_order(const MatrixC& a, Complex lambda,
                                                   const ToleranceConfig& tol = {}) {
    const std::size_t k = a.dim();
    MatrixC m = a;
    for (std::size_t i = 0; i < k; ++i) m(i, i) -= lambda;
    const double base = std::max(1.0, op_norm(m));
    MatrixC power = m;
    double ref = base;
    for (std::size_t p = 1; p <= k; ++p) {
        if (op_norm(power) <= tol.zero_tol * ref) return p;
        if (p < k) {
            power = power * m;
            ref *= base;
        }
    }
    return std::nullopt;
}

namespace detail {

// Eigenvectors of an upper triangular T by back substitution; column j of
// the result solves (T - t_jj I) y = 0 with y_j = 1.
inline MatrixC triangular_eigenvectors(const MatrixC& t) {
    const std::size_t n = t.dim();
    const double ulp = std::numeric_limits<double>::epsilon();
    double tnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) tnorm = std::max(tnorm, std::abs(t(i, j)));
    const double smin = std::max(ulp * tnorm, std::numeric_limits<double>::min() * 16.0);
    MatrixC y(n);
    for (std::size_t j = 0; j < n; ++j) {
        y(j, j) = 1.0;
        const Complex lam = t(j, j);
        for (std::size_t ii = j; ii-- > 0;) {
            Complex rhs = 0.0;
            for (std::size_t m = ii + 1; m <= j; ++m) rhs += t(ii, m) * y(m, j);
            Complex denom = t(ii, ii) - lam;
            if (std::abs(denom) < smin) denom = Complex(smin, 0.0);
            y(ii, j) = -rhs / denom;
            // guard against overflow for badly graded T
            const double mag = std::abs(y(ii, j));
            if (mag > 1e150) {
                const double f = 1.0 / mag;
                for (std::size_t m = ii; m <= j; ++m) y(m, j) *= f;
            }
        }
    }
    return y;
}

}  // namespace detail

// Full eigendecomposition.  Eigenvalues always; eigenvectors only when a
// full basis with condition number <= tol.cond_max exists.
inline EigenDecomposition eig(const MatrixC& a, const ToleranceConfig& tol = {}) {
    const std::size_t n = a.dim();
    EigenDecomposition dec;
    const SchurForm s = schur(a);
    dec.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) dec.values[i] = s.t(i, i);

    MatrixC p = s.q * detail::triangular_eigenvectors(s.t);
    // column-normalize to unit 2-norm
    for (std::size_t j = 0; j < n; ++j) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm2 += std::norm(p(i, j));
        const double norm = std::sqrt(norm2);
        if (norm == 0.0) return dec;  // degenerate column, no basis
        for (std::size_t i = 0; i < n; ++i) p(i, j) /= norm;
    }
    double cond = std::numeric_limits<double>::infinity();
    try {
        cond = op_norm(p) * op_norm(inverse(p));
    } catch (const Error&) {
        return dec;  // singular eigenvector matrix
    }
    dec.cond_estimate = cond;
    if (cond <= tol.cond_max) {
        dec.vectors_present = true;
        dec.vectors = p;
    }
    return dec;
}

}  // namespace matfunc
