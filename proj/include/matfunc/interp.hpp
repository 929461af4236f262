#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "matfunc/divdiff.hpp"

namespace matfunc {

// Polynomial in the monomial basis, constant term first.
struct PolynomialC {
    std::vector<Complex> coeffs{Complex(0.0, 0.0)};

    std::size_t degree() const { return coeffs.size() - 1; }

    Complex operator()(Complex z) const {
        Complex v(0.0, 0.0);
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
        return v;
    }

    PolynomialC derivative() const {
        if (coeffs.size() == 1) return PolynomialC{};
        PolynomialC d;
        d.coeffs.assign(coeffs.size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 1; i < coeffs.size(); ++i)
            d.coeffs[i - 1] = coeffs[i] * Complex(double(i), 0.0);
        return d;
    }

    void trim(double tol = 0.0) {
        while (coeffs.size() > 1 && std::abs(coeffs.back()) <= tol) coeffs.pop_back();
    }
};

// Prescribed values f(node), f'(node), ..., f^(p-1)(node) at distinct nodes.
struct HermiteNode {
    Complex node;
    std::vector<Complex> values;
};
using HermiteData = std::vector<HermiteNode>;

// Monomial expansion is stable enough at desk scale; keep degrees modest.
inline constexpr std::size_t kMaxExpandedDegree = 31;

namespace interp_detail {

// Expand a Newton-form polynomial sum_q c_q prod_{j<q} (z - x_j) into the
// monomial basis by synthetic multiplication.
inline PolynomialC expand_newton(const std::vector<Complex>& coeffs,
                                 const std::vector<Complex>& nodes) {
    if (coeffs.size() > kMaxExpandedDegree + 1)
        raise_error("InvalidArgument", "interpolation degree exceeds the supported cap");
    std::vector<Complex> acc{Complex(0.0, 0.0)};
    std::vector<Complex> basis{Complex(1.0, 0.0)};
    for (std::size_t q = 0; q < coeffs.size(); ++q) {
        if (acc.size() < basis.size()) acc.resize(basis.size(), Complex(0.0, 0.0));
        for (std::size_t i = 0; i < basis.size(); ++i) acc[i] += coeffs[q] * basis[i];
        if (q + 1 < coeffs.size()) {
            // basis <- basis * (z - nodes[q])
            std::vector<Complex> nb(basis.size() + 1, Complex(0.0, 0.0));
            for (std::size_t i = 0; i < basis.size(); ++i) {
                nb[i] -= nodes[q] * basis[i];
                nb[i + 1] += basis[i];
            }
            basis = std::move(nb);
        }
    }
    PolynomialC p;
    p.coeffs = std::move(acc);
    p.trim();
    return p;
}

}  // namespace interp_detail

// Newton interpolation polynomial from a divided-difference table built over
// distinct nodes, expanded into the monomial basis.
inline PolynomialC newton_poly(const DDTable& table) {
    return interp_detail::expand_newton(table.newton_coefficients(), table.nodes);
}

// Hermite interpolation: the unique polynomial of degree <= (sum p_j) - 1
// matching the prescribed derivative values, realized as a confluent-node
// Newton form.
inline PolynomialC hermite_poly(const HermiteData& data) {
    if (data.empty()) raise_error("InvalidArgument", "hermite data must be nonempty");
    for (const auto& hn : data)
        if (hn.values.empty())
            raise_error("InvalidArgument", "each hermite node needs at least one value");
    for (std::size_t a = 0; a < data.size(); ++a)
        for (std::size_t b = a + 1; b < data.size(); ++b)
            if (data[a].node == data[b].node)
                raise_error("InvalidArgument", "hermite nodes must be pairwise distinct");

    NodeList nodes;
    for (const auto& hn : data)
        for (std::size_t m = 0; m < hn.values.size(); ++m) nodes.push_back(hn.node);

    std::size_t max_mult = 0;
    for (const auto& hn : data) max_mult = std::max(max_mult, hn.values.size());
    std::vector<double> factorial(max_mult, 1.0);
    for (std::size_t j = 1; j < max_mult; ++j) factorial[j] = factorial[j - 1] * double(j);

    const DDTable table = divdiff_detail::build_table(
        nodes, [&](std::size_t g) { return data[g].values[0]; },
        [&](std::size_t g, std::size_t j) { return data[g].values[j] / factorial[j]; }, 0.0);
    return interp_detail::expand_newton(table.newton_coefficients(), table.nodes);
}

// Max residual |P^(s)(node_j) - prescribed| over all conditions.
inline double poly_derivative_check(const PolynomialC& p, const HermiteData& data) {
    double worst = 0.0;
    for (const auto& hn : data) {
        PolynomialC d = p;
        for (std::size_t s = 0; s < hn.values.size(); ++s) {
            worst = std::max(worst, std::abs(d(hn.node) - hn.values[s]));
            d = d.derivative();
        }
    }
    return worst;
}

}  // namespace matfunc
