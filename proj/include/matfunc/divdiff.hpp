#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "matfunc/funcspec.hpp"
#include "matfunc/matrix.hpp"

namespace matfunc {

using NodeList = std::vector<Complex>;

// Triangular divided-difference table over an ordered node list with
// repeated nodes allowed (confluent entries).  entries[i][j] holds
// dd(z_i, ..., z_{i+j}); the top row gives the Newton coefficients.
struct DDTable {
    NodeList nodes;  // grouped order: equal nodes adjacent, groups by first appearance
    std::vector<std::vector<Complex>> entries;
    bool near_duplicate_warning = false;

    Complex value() const { return entries.front().back(); }
    const std::vector<Complex>& newton_coefficients() const { return entries.front(); }
};

namespace divdiff_detail {

// Stable grouping: order groups of exactly-equal nodes by first appearance,
// so distinct inputs keep their order.  Returns grouped nodes plus each
// position's group index.
inline void group_nodes(const NodeList& nodes, NodeList& grouped, std::vector<std::size_t>& group_of,
                        std::vector<Complex>& group_values, std::vector<std::size_t>& group_mult) {
    group_values.clear();
    group_mult.clear();
    for (Complex z : nodes) {
        bool found = false;
        for (std::size_t g = 0; g < group_values.size(); ++g)
            if (group_values[g] == z) {
                ++group_mult[g];
                found = true;
                break;
            }
        if (!found) {
            group_values.push_back(z);
            group_mult.push_back(1);
        }
    }
    grouped.clear();
    group_of.clear();
    for (std::size_t g = 0; g < group_values.size(); ++g)
        for (std::size_t m = 0; m < group_mult[g]; ++m) {
            grouped.push_back(group_values[g]);
            group_of.push_back(g);
        }
}

// Shared confluent-table core.  `value(g)` is f at group g's node,
// `scaled_derivative(g, j)` is f^(j) there divided by j!.
inline DDTable build_table(const NodeList& nodes,
                           const std::function<Complex(std::size_t)>& value,
                           const std::function<Complex(std::size_t, std::size_t)>& scaled_derivative,
                           double zero_tol) {
    DDTable t;
    std::vector<std::size_t> group_of, group_mult;
    std::vector<Complex> group_values;
    group_nodes(nodes, t.nodes, group_of, group_values, group_mult);

    for (std::size_t a = 0; a < group_values.size(); ++a)
        for (std::size_t b = a + 1; b < group_values.size(); ++b)
            if (std::abs(group_values[a] - group_values[b]) < zero_tol)
                t.near_duplicate_warning = true;

    const std::size_t n = t.nodes.size();
    t.entries.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        t.entries[i].resize(n - i);
        t.entries[i][0] = value(group_of[i]);
    }
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i + j < n; ++i) {
            if (group_of[i] == group_of[i + j]) {
                t.entries[i][j] = scaled_derivative(group_of[i], j);
            } else {
                t.entries[i][j] =
                    (t.entries[i + 1][j - 1] - t.entries[i][j - 1]) / (t.nodes[i + j] - t.nodes[i]);
            }
        }
    return t;
}

}  // namespace divdiff_detail

// Divided-difference table of f over the node list.  Repeated nodes need an
// expression function with symbolic derivatives (Hermite/confluent entries);
// every node must lie in the domain of f.
inline DDTable dd_table(const FunctionSpec& f, const NodeList& nodes,
                        const ToleranceConfig& tol = {}) {
    if (nodes.empty()) raise_error("InvalidArgument", "node list must be nonempty");

    NodeList grouped;
    std::vector<std::size_t> group_of, group_mult;
    std::vector<Complex> group_values;
    divdiff_detail::group_nodes(nodes, grouped, group_of, group_values, group_mult);

    std::size_t max_mult = 0;
    for (std::size_t m : group_mult) max_mult = std::max(max_mult, m);
    if (max_mult > 1 && f.derivative_budget() < int(max_mult) - 1)
        raise_error("NotDifferentiable",
                    "repeated nodes need derivatives the function cannot provide");

    // domain check + values per group (checked evaluation)
    std::vector<Complex> values(group_values.size());
    for (std::size_t g = 0; g < group_values.size(); ++g) values[g] = f.eval(group_values[g]);

    // derivative expressions evaluated lazily per (group, order)
    std::vector<double> factorial(max_mult, 1.0);
    for (std::size_t j = 1; j < max_mult; ++j) factorial[j] = factorial[j - 1] * double(j);

    return divdiff_detail::build_table(
        nodes, [&](std::size_t g) { return values[g]; },
        [&](std::size_t g, std::size_t j) {
            return f.derivative_at(group_values[g], int(j)) / factorial[j];
        },
        tol.zero_tol);
}

// dd(z_1, ..., z_n) f, the top-right table entry.
inline Complex dd_value(const FunctionSpec& f, const NodeList& nodes,
                        const ToleranceConfig& tol = {}) {
    return dd_table(f, nodes, tol).value();
}

// Lower bidiagonal matrix with the nodes on the diagonal and eps on the
// subdiagonal; diagonalizable by construction since the nodes are distinct.
inline MatrixC opitz_matrix(const NodeList& nodes, double eps) {
    if (nodes.size() < 2) raise_error("InvalidArgument", "opitz matrix needs at least 2 nodes");
    if (!(eps > 0.0)) raise_error("InvalidArgument", "opitz epsilon must be positive");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j])
                raise_error("DegenerateNodes", "opitz nodes must be pairwise distinct");
    MatrixC a(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        a(i, i) = nodes[i];
        if (i + 1 < nodes.size()) a(i + 1, i) = eps;
    }
    return a;
}

// Bottom-left corner entry.
inline Complex corner_of(const MatrixC& m) { return m(m.dim() - 1, 0); }

}  // namespace matfunc
