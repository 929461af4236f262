#pragma once

// Shared helpers and independent oracles for the test suites.  The oracles
// here deliberately avoid the library's own computational paths: divided
// differences by the literal recursion, characteristic polynomials by
// Faddeev-LeVerrier, derivatives by central differences.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "matfunc/matrix.hpp"

namespace oracle {

using matfunc::Complex;
using matfunc::MatrixC;

// Divided difference by the bare recursion, no grouping or confluence.
inline Complex divided_difference(const std::function<Complex(Complex)>& f,
                                  std::vector<Complex> nodes) {
    std::vector<Complex> d(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) d[i] = f(nodes[i]);
    for (std::size_t j = 1; j < nodes.size(); ++j)
        for (std::size_t i = 0; i + j < nodes.size(); ++i)
            d[i] = (d[i + 1] - d[i]) / (nodes[i + j] - nodes[i]);
    return d[0];
}

// Central finite difference for f'(z).
inline Complex central_diff(const std::function<Complex(Complex)>& f, Complex z, double h) {
    return (f(z + Complex(h, 0.0)) - f(z - Complex(h, 0.0))) / Complex(2.0 * h, 0.0);
}

// Characteristic polynomial coefficients (constant term first) by the
// Faddeev-LeVerrier recurrence; independent of any eigensolver.
inline std::vector<Complex> charpoly(const MatrixC& a) {
    const std::size_t n = a.dim();
    std::vector<Complex> c(n + 1, Complex(0.0, 0.0));
    c[n] = 1.0;
    MatrixC m = MatrixC::identity(n);
    MatrixC am(n);
    for (std::size_t k = 1; k <= n; ++k) {
        am = a * m;
        const Complex ck = -am.trace() / Complex(double(k), 0.0);
        c[n - k] = ck;
        m = am;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += ck;
    }
    return c;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(gen);
    }
    Complex complex_in_disk(Complex center, double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        const double t = uniform(0.0, 2.0 * M_PI);
        return center + Complex(r * std::cos(t), r * std::sin(t));
    }
    MatrixC matrix(std::size_t k, double scale = 1.0) {
        MatrixC m(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                m(i, j) = Complex(uniform(-scale, scale), uniform(-scale, scale));
        return m;
    }
    // Unitary matrix from the QR-like orthonormalization of a random matrix
    // via Householder products.
    MatrixC unitary(std::size_t k) {
        MatrixC q = MatrixC::identity(k);
        for (std::size_t step = 0; step + 1 < k; ++step) {
            std::vector<Complex> v(k, Complex(0.0, 0.0));
            double norm2 = 0.0;
            for (std::size_t i = step; i < k; ++i) {
                v[i] = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
                norm2 += std::norm(v[i]);
            }
            if (norm2 == 0.0) continue;
            const double beta = 2.0 / norm2;
            for (std::size_t i = 0; i < k; ++i) {
                Complex dot = 0.0;
                for (std::size_t j = 0; j < k; ++j) dot += q(i, j) * v[j];
                dot *= beta;
                for (std::size_t j = 0; j < k; ++j) q(i, j) -= dot * std::conj(v[j]);
            }
        }
        return q;
    }
    // Invertible matrix with singular values in [1/s, 1], so cond <= s.
    MatrixC well_conditioned(std::size_t k, double cond_bound) {
        MatrixC u = unitary(k), v = unitary(k);
        MatrixC d(k);
        d(0, 0) = 1.0;
        if (k > 1) d(k - 1, k - 1) = 1.0 / cond_bound;
        for (std::size_t i = 1; i + 1 < k; ++i) d(i, i) = uniform(1.0 / cond_bound, 1.0);
        if (k == 1) d(0, 0) = 1.0;
        return u * d * v;
    }
    // Distinct complex values in the disk with pairwise separation >= sep.
    std::vector<Complex> separated_points(std::size_t count, Complex center, double radius,
                                          double sep) {
        std::vector<Complex> pts;
        while (pts.size() < count) {
            const Complex z = complex_in_disk(center, radius);
            bool ok = true;
            for (Complex w : pts)
                if (std::abs(z - w) < sep) ok = false;
            if (ok) pts.push_back(z);
        }
        return pts;
    }
};

inline double max_entry_diff(const MatrixC& a, const MatrixC& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace oracle
