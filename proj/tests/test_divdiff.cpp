#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matfunc/divdiff.hpp"
#include "support.hpp"

using matfunc::Complex;
using matfunc::FunctionSpec;
using matfunc::NodeList;

TEST_CASE("dd_table reference values") {
    SECTION("f = z^2, nodes (1,2): first difference 3") {
        auto f = FunctionSpec::from_expression("z^2");
        const auto t = matfunc::dd_table(f, {Complex(1, 0), Complex(2, 0)});
        CHECK(std::abs(t.value() - Complex(3, 0)) <= 1e-14);
        CHECK(t.entries[0][0] == Complex(1, 0));
        CHECK(t.entries[1][0] == Complex(4, 0));
    }
    SECTION("tcdis pair at n=2 gives (3/2)^2") {
        auto f = matfunc::tcdis_domain(2);
        const double hi = 0.5 + 1.0 / 9.0;
        const Complex d = matfunc::dd_value(f, {Complex(hi, 0), Complex(0.5, 0)});
        CHECK(std::abs(d - Complex(2.25, 0)) <= 1e-12);
    }
    SECTION("confluent pair for exp at 0 recovers f'(0) = 1") {
        auto f = FunctionSpec::from_expression("exp(z)");
        const Complex d = matfunc::dd_value(f, {Complex(0, 0), Complex(0, 0)});
        CHECK(std::abs(d - Complex(1, 0)) <= 1e-15);
    }
}

TEST_CASE("dd_value reference values") {
    SECTION("single node is f(z)") {
        auto f = FunctionSpec::from_expression("exp(z)*sin(z)");
        const Complex z(0.3, -0.2);
        CHECK(matfunc::dd_value(f, {z}) == f.eval(z));
    }
    SECTION("second difference of z^2 is 1") {
        auto f = FunctionSpec::from_expression("z^2");
        const Complex d = matfunc::dd_value(f, {Complex(0, 0), Complex(1, 0), Complex(5, 0)});
        CHECK(std::abs(d - Complex(1, 0)) <= 1e-14);
    }
    SECTION("second difference of an affine function vanishes") {
        auto f = FunctionSpec::from_expression("2*z + 3");
        const Complex d = matfunc::dd_value(f, {Complex(-1, 0), Complex(0.5, 0.5), Complex(2, -1)});
        CHECK(std::abs(d) <= 1e-14);
    }
}

TEST_CASE("dd_table error cases") {
    SECTION("repeated node on a table function") {
        auto f = matfunc::tcdis_domain(3);
        try {
            matfunc::dd_value(f, {Complex(0.5, 0), Complex(0.5, 0)});
            FAIL("expected NotDifferentiable");
        } catch (const matfunc::Error& e) {
            CHECK(e.token() == "NotDifferentiable");
        }
    }
    SECTION("node outside the domain") {
        auto f = FunctionSpec::from_expression("z^2", matfunc::DomainSpec::real_interval(0, 1));
        try {
            matfunc::dd_value(f, {Complex(0.5, 0), Complex(3, 0)});
            FAIL("expected DomainError");
        } catch (const matfunc::Error& e) {
            CHECK(e.token() == "DomainError");
        }
    }
    SECTION("near-duplicate distinct nodes set the warning flag") {
        auto f = FunctionSpec::from_expression("exp(z)");
        const auto t = matfunc::dd_table(f, {Complex(0, 0), Complex(1e-12, 0)});
        CHECK(t.near_duplicate_warning);
        const auto clean = matfunc::dd_table(f, {Complex(0, 0), Complex(1, 0)});
        CHECK_FALSE(clean.near_duplicate_warning);
    }
}

TEST_CASE("dd_table matches the bare recursion oracle") {
    oracle::Rng rng(17);
    auto f = FunctionSpec::from_expression("exp(z)*(z^2+1)");
    auto fn = [&](Complex z) { return f.eval(z); };
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const NodeList nodes = rng.separated_points(n, Complex(0, 0), 1.0, 1e-2);
        const Complex got = matfunc::dd_value(f, nodes);
        const Complex want = oracle::divided_difference(fn, nodes);
        CHECK(std::abs(got - want) <= 1e-9 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("(DD1) permutation symmetry") {
    oracle::Rng rng(99);
    const char* corpus[] = {"exp(z)", "z^3", "1/(z-10)"};
    for (const char* text : corpus) {
        auto f = FunctionSpec::from_expression(text);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 2 + trial % 5;  // n <= 6
            NodeList nodes = rng.separated_points(n, Complex(0, 0), 1.0, 1e-3);
            const Complex base = matfunc::dd_value(f, nodes);
            NodeList perm = nodes;
            std::shuffle(perm.begin(), perm.end(), rng.gen);
            const Complex permuted = matfunc::dd_value(f, perm);
            INFO(text << " n=" << n);
            CHECK(std::abs(permuted - base) <= 1e-8 * (1.0 + std::abs(base)));
        }
    }
}

TEST_CASE("(loc-L) Lipschitz inequality for exp on the unit disk") {
    oracle::Rng rng(1234);
    auto f = FunctionSpec::from_expression("exp(z)");
    for (std::size_t n : {2ul, 3ul, 4ul}) {
        // M = sup over the disk of |dd_{n+1}| sampled; the supremum of the
        // (n+1)-point difference bounds the Lipschitz constant of the n-point one.
        double m_sup = 0.0;
        for (int s = 0; s < 300; ++s) {
            const NodeList nodes = rng.separated_points(n + 1, Complex(0, 0), 1.0, 1e-3);
            m_sup = std::max(m_sup, std::abs(matfunc::dd_value(f, nodes)));
        }
        for (int trial = 0; trial < 500; ++trial) {
            const NodeList a = rng.separated_points(n, Complex(0, 0), 1.0, 1e-3);
            NodeList b = a;
            double moved = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex sh = rng.complex_in_disk(Complex(0, 0), 0.05);
                b[i] += sh;
            }
            // keep b distinct and inside the disk
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                if (std::abs(b[i]) >= 1.0) ok = false;
                for (std::size_t j = i + 1; j < n; ++j)
                    if (std::abs(b[i] - b[j]) < 1e-9) ok = false;
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < n; ++i) moved += std::abs(a[i] - b[i]);
            const Complex da = matfunc::dd_value(f, a);
            const Complex db = matfunc::dd_value(f, b);
            CHECK(std::abs(da - db) <= 1.05 * m_sup * moved + 1e-12);
        }
    }
}

TEST_CASE("confluent consistency for exp") {
    auto f = FunctionSpec::from_expression("exp(z)");
    const Complex a(0.3, 0.0);

    SECTION("exact confluent values match e^a / j!") {
        double factorial = 1.0;
        for (int j = 1; j <= 4; ++j) {
            factorial *= j;
            NodeList nodes(j + 1, a);
            const Complex got = matfunc::dd_value(f, nodes);
            const Complex want = std::exp(a) / factorial;
            CHECK(std::abs(got - want) <= 1e-9);
        }
    }
    SECTION("collapsing distinct nodes converge monotonically") {
        for (int j : {1, 2}) {
            const Complex confluent = matfunc::dd_value(f, NodeList(j + 1, a));
            double prev_err = 1e300;
            for (double h : {1e-2, 1e-3, 1e-4}) {
                NodeList nodes;
                for (int m = 0; m <= j; ++m)
                    nodes.push_back(a + Complex(h * (2.0 * m / j - 1.0), 0.0));
                const double err = std::abs(matfunc::dd_value(f, nodes) - confluent);
                CHECK(err < prev_err);
                prev_err = err;
            }
        }
    }
}

TEST_CASE("mean value bound for divided differences of sin on [0,1]") {
    // |dd(x_1..x_{k+1}) sin| <= Lip(sin^(k-1)) = 1.
    oracle::Rng rng(55);
    auto f = FunctionSpec::from_expression("sin(z)", matfunc::DomainSpec::real_interval(0, 1));
    for (int k = 1; k <= 4; ++k) {
        for (int trial = 0; trial < 500; ++trial) {
            NodeList nodes;
            while (nodes.size() < std::size_t(k + 1)) {
                const Complex z(rng.uniform(0.0, 1.0), 0.0);
                bool ok = true;
                for (Complex w : nodes)
                    if (std::abs(z - w) < 1e-4) ok = false;
                if (ok) nodes.push_back(z);
            }
            CHECK(std::abs(matfunc::dd_value(f, nodes)) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("norm-growth bound for exp differences near 0") {
    // |dd_n| <= M / eps^(n-1) with M = sup_{|w|<=1} |e^w| = e and eps = 1/2.
    oracle::Rng rng(77);
    auto f = FunctionSpec::from_expression("exp(z)");
    const double m = std::exp(1.0);
    for (std::size_t n = 1; n <= 8; ++n) {
        const double bound = m * std::pow(2.0, double(n) - 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const NodeList nodes = rng.separated_points(n, Complex(0, 0), 0.5, 1e-3);
            CHECK(std::abs(matfunc::dd_value(f, nodes)) <= bound);
        }
    }
}

TEST_CASE("opitz_matrix construction") {
    SECTION("2x2") {
        const auto a = matfunc::opitz_matrix({Complex(1, 0), Complex(2, 0)}, 0.5);
        CHECK(a(0, 0) == Complex(1, 0));
        CHECK(a(0, 1) == Complex(0, 0));
        CHECK(a(1, 0) == Complex(0.5, 0));
        CHECK(a(1, 1) == Complex(2, 0));
    }
    SECTION("3x3 bidiagonal") {
        const auto a = matfunc::opitz_matrix({Complex(0, 0), Complex(1, 0), Complex(2, 0)}, 1.0);
        for (std::size_t i = 0; i < 3; ++i) CHECK(a(i, i) == Complex(double(i), 0));
        CHECK(a(1, 0) == Complex(1, 0));
        CHECK(a(2, 1) == Complex(1, 0));
        CHECK(a(2, 0) == Complex(0, 0));
    }
    SECTION("degenerate nodes rejected") {
        try {
            matfunc::opitz_matrix({Complex(1, 0), Complex(1, 0)}, 0.1);
            FAIL("expected DegenerateNodes");
        } catch (const matfunc::Error& e) {
            CHECK(e.token() == "DegenerateNodes");
        }
    }
}

TEST_CASE("corner_of") {
    CHECK(matfunc::corner_of(matfunc::MatrixC::identity(3)) == Complex(0, 0));
    CHECK(matfunc::corner_of(matfunc::opitz_matrix({Complex(1, 0), Complex(2, 0)}, 0.5)) ==
          Complex(0.5, 0));
    matfunc::MatrixC m{{Complex(1, 0), Complex(2, 0)}, {Complex(3, 0), Complex(4, 0)}};
    CHECK(matfunc::corner_of(m) == Complex(3, 0));
}
