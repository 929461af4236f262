#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "matfunc/expr.hpp"

namespace matfunc {

enum class DomainKind { open_disk, real_interval, finite_set, whole_plane };

// A domain Omega subset of C.  For finite sets, `cluster_points` designates
// the members of Omega' (the artifact cannot infer cluster points of a
// finite table; they must be supplied).
struct DomainSpec {
    DomainKind kind = DomainKind::whole_plane;
    Complex center{0.0, 0.0};
    double radius = 0.0;
    double lo = 0.0, hi = 0.0;
    bool closed_lo = true, closed_hi = true;
    std::vector<Complex> points;
    std::vector<Complex> cluster_points;

    static DomainSpec open_disk(Complex center, double radius) {
        if (!(radius > 0)) raise_error("InvalidArgument", "disk radius must be positive");
        DomainSpec d;
        d.kind = DomainKind::open_disk;
        d.center = center;
        d.radius = radius;
        return d;
    }

    static DomainSpec real_interval(double a, double b, bool closed_left = true,
                                    bool closed_right = true) {
        if (!(a < b)) raise_error("InvalidArgument", "interval must be nondegenerate (a < b)");
        DomainSpec d;
        d.kind = DomainKind::real_interval;
        d.lo = a;
        d.hi = b;
        d.closed_lo = closed_left;
        d.closed_hi = closed_right;
        return d;
    }

    static DomainSpec finite_set(std::vector<Complex> pts, std::vector<Complex> clusters = {}) {
        if (pts.empty()) raise_error("InvalidArgument", "finite_set needs at least one point");
        auto less = [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        };
        std::sort(pts.begin(), pts.end(), less);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (pts[i] == pts[i + 1])
                raise_error("InvalidArgument", "finite_set points must be pairwise distinct");
        DomainSpec d;
        d.kind = DomainKind::finite_set;
        d.points = std::move(pts);
        d.cluster_points = std::move(clusters);
        return d;
    }

    static DomainSpec whole_plane() { return DomainSpec{}; }

    // Exact membership; finite sets use exact key match.
    bool contains(Complex z) const {
        switch (kind) {
            case DomainKind::open_disk: return std::abs(z - center) < radius;
            case DomainKind::real_interval: {
                if (z.imag() != 0.0) return false;
                const double x = z.real();
                if (x < lo || (x == lo && !closed_lo)) return false;
                if (x > hi || (x == hi && !closed_hi)) return false;
                return true;
            }
            case DomainKind::finite_set:
                return std::binary_search(points.begin(), points.end(), z,
                                          [](Complex a, Complex b) {
                                              return a.real() != b.real() ? a.real() < b.real()
                                                                          : a.imag() < b.imag();
                                          });
            case DomainKind::whole_plane: return is_finite(z);
        }
        return false;
    }

    // Distance from z to the closure of the domain.
    double distance_to(Complex z) const {
        switch (kind) {
            case DomainKind::open_disk: return std::max(0.0, std::abs(z - center) - radius);
            case DomainKind::real_interval: {
                double dx = 0.0;
                if (z.real() < lo) dx = lo - z.real();
                else if (z.real() > hi) dx = z.real() - hi;
                return std::hypot(dx, z.imag());
            }
            case DomainKind::finite_set: {
                double best = std::numeric_limits<double>::infinity();
                for (Complex p : points) best = std::min(best, std::abs(z - p));
                return best;
            }
            case DomainKind::whole_plane: return 0.0;
        }
        return 0.0;
    }

    // Nearest stored key of a finite set.
    Complex nearest_key(Complex z) const {
        Complex best = points.front();
        double bd = std::abs(z - best);
        for (Complex p : points) {
            const double d = std::abs(z - p);
            if (d < bd) {
                bd = d;
                best = p;
            }
        }
        return best;
    }

    // Whether z (assumed in or near the domain) counts as a cluster point of
    // Omega.  Continuous domains are perfect sets; finite sets rely on the
    // designated cluster points or on a neighbor within `tol`.
    bool in_cluster_set(Complex z, double tol) const {
        switch (kind) {
            case DomainKind::open_disk:
            case DomainKind::real_interval:
            case DomainKind::whole_plane: return true;
            case DomainKind::finite_set: {
                for (Complex c : cluster_points)
                    if (std::abs(z - c) <= tol) return true;
                int close = 0;
                for (Complex p : points)
                    if (std::abs(z - p) <= tol && ++close > 1) return true;
                return false;
            }
        }
        return false;
    }
};

// Finite map from exact keys to values.
class SampleTable {
public:
    SampleTable() = default;

    explicit SampleTable(std::vector<std::pair<Complex, Complex>> entries)
        : entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
            return a.first.real() != b.first.real() ? a.first.real() < b.first.real()
                                                    : a.first.imag() < b.first.imag();
        });
        for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
            if (entries_[i].first == entries_[i + 1].first)
                raise_error("InvalidArgument", "sample table keys must be distinct");
    }

    std::optional<Complex> lookup(Complex key) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const auto& e, Complex k) {
                                       return e.first.real() != k.real()
                                                  ? e.first.real() < k.real()
                                                  : e.first.imag() < k.imag();
                                   });
        if (it != entries_.end() && it->first == key) return it->second;
        return std::nullopt;
    }

    std::vector<Complex> keys() const {
        std::vector<Complex> k;
        k.reserve(entries_.size());
        for (const auto& e : entries_) k.push_back(e.first);
        return k;
    }

    const std::vector<std::pair<Complex, Complex>>& entries() const { return entries_; }

private:
    std::vector<std::pair<Complex, Complex>> entries_;
};

enum class Differentiability { holomorphic_expr, real_smooth_expr, non_smooth, table };

// A scalar function f: Omega -> C, expression-backed or table-backed.
class FunctionSpec {
public:
    static FunctionSpec from_expression(const std::string& text,
                                        DomainSpec domain = DomainSpec::whole_plane()) {
        return from_expression(parse(text), std::move(domain));
    }

    static FunctionSpec from_expression(Expr e, DomainSpec domain = DomainSpec::whole_plane()) {
        FunctionSpec f;
        f.expr_ = std::move(e);
        f.domain_ = std::move(domain);
        f.diff_ = classify(*f.expr_, f.domain_);
        f.validate_on_sample();
        return f;
    }

    static FunctionSpec from_table(SampleTable table, std::vector<Complex> cluster_points = {}) {
        FunctionSpec f;
        f.domain_ = DomainSpec::finite_set(table.keys(), std::move(cluster_points));
        f.table_ = std::move(table);
        f.diff_ = Differentiability::table;
        return f;
    }

    bool is_expression() const { return expr_.has_value(); }
    const Expr& expression() const { return *expr_; }
    const SampleTable& table() const { return table_; }
    const DomainSpec& domain() const { return domain_; }
    Differentiability differentiability() const { return diff_; }

    // Highest derivative order obtainable at points of Omega'.
    int derivative_budget() const {
        return diff_ == Differentiability::holomorphic_expr ? INT_MAX : 0;
    }

    // Domain-checked evaluation.
    Complex eval(Complex z) const {
        if (expr_) {
            if (!domain_.contains(z))
                raise_error("DomainError", "point outside the function domain");
            return matfunc::eval(*expr_, z);
        }
        const auto v = table_.lookup(z);
        if (!v) raise_error("DomainError", "key not present in sample table");
        return *v;
    }

    // Evaluation for callers that enforce their own domain policy (eigenvalue
    // snapping).  Expressions evaluate anywhere; tables still need exact keys.
    Complex eval_unchecked(Complex z) const {
        if (expr_) return matfunc::eval(*expr_, z);
        const auto v = table_.lookup(z);
        if (!v) raise_error("DomainError", "key not present in sample table");
        return *v;
    }

    // f^(order) at z through the symbolic derivative; order 0 evaluates f.
    Complex derivative_at(Complex z, int order) const {
        if (order == 0) return eval_unchecked(z);
        if (!expr_)
            raise_error("NotDifferentiable", "sample tables carry no derivative data");
        return matfunc::eval(derivative(*expr_, order), z);
    }

private:
    static Differentiability classify(const Expr& e, const DomainSpec& dom) {
        if (is_holomorphic(e)) return Differentiability::holomorphic_expr;
        bool has_abs = false;
        scan_abs(e, has_abs);
        if (!has_abs && dom.kind == DomainKind::real_interval)
            return Differentiability::real_smooth_expr;
        return Differentiability::non_smooth;
    }

    static void scan_abs(const Expr& e, bool& has_abs) {
        if (e.kind == ExprKind::apply && e.func == Func::abs_f) has_abs = true;
        for (const Expr& k : e.kids) scan_abs(k, has_abs);
    }

    // The expression must evaluate at a 100-point sample of its domain.
    void validate_on_sample() const {
        std::vector<Complex> sample;
        switch (domain_.kind) {
            case DomainKind::open_disk:
            case DomainKind::whole_plane: {
                const Complex c = domain_.kind == DomainKind::open_disk ? domain_.center
                                                                        : Complex(0.0, 0.0);
                const double r = domain_.kind == DomainKind::open_disk ? domain_.radius : 1.0;
                for (int m = 0; m < 10; ++m)
                    for (int j = 0; j < 10; ++j) {
                        const double rho = r * (m + 0.5) / 10.0;
                        const double th = 2.0 * M_PI * (j + 0.37) / 10.0;
                        sample.push_back(c + Complex(rho * std::cos(th), rho * std::sin(th)));
                    }
                break;
            }
            case DomainKind::real_interval:
                for (int m = 0; m < 100; ++m)
                    sample.push_back(Complex(
                        domain_.lo + (domain_.hi - domain_.lo) * (m + 0.5) / 100.0, 0.0));
                break;
            case DomainKind::finite_set:
                for (std::size_t m = 0; m < std::min<std::size_t>(100, domain_.points.size()); ++m)
                    sample.push_back(domain_.points[m]);
                break;
        }
        for (Complex z : sample) (void)matfunc::eval(*expr_, z);
    }

    std::optional<Expr> expr_;
    SampleTable table_;
    DomainSpec domain_;
    Differentiability diff_ = Differentiability::table;
};

// The compact domain of the paper's blow-up example:
//   Omega = {0}u{1/n: n>=2}u{1/n + 3^-n: n>=2},  f(0)=f(1/n)=0, f(1/n+3^-n)=2^-n.
// In double precision 1/n + 3^-n collides with 1/n from n = 38 on
// (3^-n falls below half an ulp of 1/n), so N is capped at 37.
inline FunctionSpec tcdis_domain(int N) {
    if (N < 2) raise_error("RangeError", "tcdis domain starts at n = 2");
    if (N > 37)
        raise_error("RangeError",
                    "tcdis keys 1/n + 3^-n collide with 1/n in double precision for n >= 38");
    std::vector<std::pair<Complex, Complex>> entries;
    entries.emplace_back(Complex(0.0, 0.0), Complex(0.0, 0.0));
    for (int n = 2; n <= N; ++n) {
        const double base = 1.0 / double(n);
        const double bumped = base + std::pow(3.0, -double(n));
        entries.emplace_back(Complex(base, 0.0), Complex(0.0, 0.0));
        entries.emplace_back(Complex(bumped, 0.0), Complex(std::ldexp(1.0, -n), 0.0));
    }
    return FunctionSpec::from_table(SampleTable(std::move(entries)), {Complex(0.0, 0.0)});
}

// Sample-table text format: one `re im f_re f_im` line per point; `#` starts
// a comment line.
inline SampleTable parse_table(std::istream& in) {
    std::vector<std::pair<Complex, Complex>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double re, im, fre, fim;
        if (!(ls >> re >> im >> fre >> fim))
            raise_error("FormatError", "bad table row at line " + std::to_string(lineno));
        std::string rest;
        if (ls >> rest)
            raise_error("FormatError", "trailing tokens at line " + std::to_string(lineno));
        entries.emplace_back(Complex(re, im), Complex(fre, fim));
    }
    if (entries.empty()) raise_error("FormatError", "table file has no data rows");
    return SampleTable(std::move(entries));
}

}  // namespace matfunc
