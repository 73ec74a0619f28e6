#include <doctest.h>

#include <cmath>
#include <random>

#include "flexo/spline/hierarchical_basis.hpp"
#include "flexo/spline/uniform_basis.hpp"
#include "helpers.hpp"

using namespace flexo::spline;

TEST_SUITE_BEGIN("spline");

TEST_CASE("univariate hat midpoint and cubic values") {
    UniformBasis1D b1(1, 4);
    CHECK(b1.eval(0, 0.5, 0) == doctest::Approx(0.5).epsilon(1e-14));

    UniformBasis1D b3(3, 6);
    CHECK(b3.eval(0, 2.0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(b3.eval(0, 1.0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(b3.eval(0, 5.0, 0) == 0.0);  // outside support [0,4]
    CHECK(b3.eval(2, 4.0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));  // translation
}

TEST_CASE("univariate rejects bad arguments") {
    UniformBasis1D b(3, 6);
    CHECK_THROWS(b.eval(0, 1.0, 4));
    CHECK_THROWS(b.eval(-1, 1.0, 0));
    CHECK_THROWS(b.eval(6, 1.0, 0));
}

TEST_CASE("partition of unity, degrees 1..4") {
    std::mt19937 rng(7);
    for (int p = 1; p <= 4; ++p) {
        UniformBasis1D b(p, 20);
        std::uniform_real_distribution<double> dist(b.unity_begin(), b.unity_end());
        for (int k = 0; k < 2500; ++k) {
            const double xi = dist(rng);
            double s = 0;
            for (int i = 0; i < b.count(); ++i) s += b.eval(i, xi, 0);
            CHECK(std::abs(s - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("two-scale coefficients match the dyadic subdivision masks") {
    const auto s3 = two_scale_coeffs(3);
    const double e3[5] = {1. / 8, 4. / 8, 6. / 8, 4. / 8, 1. / 8};
    for (int j = 0; j < 5; ++j) CHECK(s3[static_cast<size_t>(j)] == doctest::Approx(e3[j]).epsilon(1e-15));

    const auto s1 = two_scale_coeffs(1);
    const double e1[3] = {0.5, 1.0, 0.5};
    for (int j = 0; j < 3; ++j) CHECK(s1[static_cast<size_t>(j)] == doctest::Approx(e1[j]).epsilon(1e-15));

    const auto s4 = two_scale_coeffs(4);
    const double e4[6] = {1. / 16, 5. / 16, 10. / 16, 10. / 16, 5. / 16, 1. / 16};
    for (int j = 0; j < 6; ++j) CHECK(s4[static_cast<size_t>(j)] == doctest::Approx(e4[j]).epsilon(1e-15));

    for (int p = 1; p <= 4; ++p) {
        double total = 0;
        for (double v : two_scale_coeffs(p)) total += v;
        CHECK(total == doctest::Approx(2.0).epsilon(1e-15));
    }
}

TEST_CASE("two-scale exactness at random points") {
    std::mt19937 rng(11);
    for (int p = 1; p <= 4; ++p) {
        const auto s = two_scale_coeffs(p);
        std::uniform_real_distribution<double> dist(0.0, p + 1.0);
        for (int k = 0; k < 1000; ++k) {
            const double xi = dist(rng);
            const double lhs = eval_translated(p, xi, 0);
            double rhs = 0;
            for (int j = 0; j <= p + 1; ++j) rhs += s[static_cast<size_t>(j)] * eval_translated(p, 2 * xi - j, 0);
            CHECK(std::abs(lhs - rhs) < 1e-14);
        }
    }
}

TEST_CASE("derivative consistency against central differences") {
    std::mt19937 rng(23);
    for (int p = 2; p <= 4; ++p) {
        std::uniform_real_distribution<double> dist(0.05, p + 0.95);
        for (int k = 0; k < 200; ++k) {
            double xi = dist(rng);
            // Keep away from knots, where one-sided limits differ in high orders.
            if (std::abs(xi - std::round(xi)) < 1e-3) continue;
            const double h = 1e-5;
            for (int d = 1; d <= 2 && d < p; ++d) {
                const double fd =
                    (eval_translated(p, xi + h, d - 1) - eval_translated(p, xi - h, d - 1)) / (2 * h);
                const double an = eval_translated(p, xi, d);
                CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)) + 1e-9);
            }
        }
    }
    // Third derivative of the cubic is piecewise constant per unit span.
    for (int span = 0; span < 4; ++span) {
        const double v1 = eval_translated(3, span + 0.25, 3);
        const double v2 = eval_translated(3, span + 0.75, 3);
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-13));
    }
}

TEST_CASE("C^{p-1} continuity at interior knots") {
    for (int p = 2; p <= 4; ++p) {
        for (int knot = 1; knot <= p; ++knot) {
            for (int d = 0; d <= p - 1 && d <= kMaxDeriv; ++d) {
                const double left = eval_translated(p, knot - 1e-12, d);
                const double right = eval_translated(p, knot + 1e-12, d);
                CHECK(std::abs(left - right) < 1e-10);
            }
        }
    }
}

TEST_CASE("tensor basis: partition of unity and chain rule") {
    auto basis = HierarchicalBasis::make_uniform(3, 0.0, 0.0, 0.25, 8, 8);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.01, 1.99);
    for (int k = 0; k < 500; ++k) {
        const double x = dist(rng), y = dist(rng);
        double s = 0;
        for (const auto& key : basis.functions()) s += basis.eval(key, x, y, 0, 0);
        CHECK(std::abs(s - 1.0) < 1e-13);
    }
    // Third mixed derivative of a degree-3 tensor function is piecewise
    // constant within a cell.
    const FnKey key{0, 4, 4};
    CHECK(basis.eval(key, 0.26, 0.31, 2, 1) != 0.0);
    // Third x-derivative of a cubic is constant within a cell (fixed y).
    CHECK(std::abs(basis.eval(key, 0.26, 0.31, 3, 0) - basis.eval(key, 0.29, 0.31, 3, 0)) < 1e-9);
}

TEST_CASE("parent equals the weighted sum of its children") {
    auto basis = HierarchicalBasis::make_uniform(3, 0.0, 0.0, 0.25, 8, 8);
    const FnKey parent{0, 5, 6};
    auto refined = basis.refine({parent});
    CHECK(!refined.is_active(parent));
    const auto s = two_scale_coeffs(3);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.05, 1.95);
    for (int k = 0; k < 100; ++k) {
        const double x = dist(rng), y = dist(rng);
        const double pv = basis.eval(parent, x, y, 0, 0);
        double cv = 0;
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; b <= 4; ++b) {
                const FnKey child{1, 2 * parent.i + a, 2 * parent.j + b};
                if (refined.is_active(child))
                    cv += s[static_cast<size_t>(a)] * s[static_cast<size_t>(b)] *
                          refined.level(1).eval(child.i, child.j, x, y, 0, 0);
            }
        CHECK(std::abs(pv - cv) < 1e-14);
    }
}

TEST_CASE("refine: empty set is identity, p=2 yields 16 children") {
    auto basis = HierarchicalBasis::make_uniform(2, 0.0, 0.0, 0.25, 8, 8);
    auto same = basis.refine({});
    CHECK(same.num_functions() == basis.num_functions());

    const std::size_t before = basis.num_functions();
    auto refined = basis.refine({FnKey{0, 4, 4}});
    CHECK(refined.num_functions() == before - 1 + 16);

    CHECK_THROWS(refined.refine({FnKey{0, 4, 4}}));  // no longer active
}

TEST_CASE("refinement preserves polynomial reproduction") {
    const int p = 3;
    auto basis = HierarchicalBasis::make_uniform(p, 0.0, 0.0, 0.25, 8, 8);
    auto refined = basis.refine({FnKey{0, 5, 5}, FnKey{0, 6, 6}});

    const auto& L0 = refined.level(0);
    const Eigen::MatrixXd C =
        flexo_test::tensor_l2_coeffs(refined, [](double x, double y) { return x * x * y; });
    auto coeff0 = [&](int i, int j) {
        return C(i - L0.first_index(), j - L0.first_index());
    };
    const auto hc = refined.carry_to_hierarchy(coeff0);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(0.05, 1.95);
    for (int k = 0; k < 200; ++k) {
        const double x = dist(rng), y = dist(rng);
        double v = 0;
        for (std::size_t id = 0; id < refined.num_functions(); ++id)
            v += hc[id] * refined.eval(refined.function(id), x, y, 0, 0);
        CHECK(std::abs(v - x * x * y) < 1e-13 * std::max(1.0, std::abs(x * x * y)));
    }
}

TEST_CASE("active set stays linearly independent across refinements") {
    auto basis = HierarchicalBasis::make_uniform(3, 0.0, 0.0, 0.25, 8, 8, 4);
    auto r1 = basis.refine({FnKey{0, 4, 4}, FnKey{0, 6, 6}});
    std::vector<FnKey> lvl1;
    for (const auto& k : r1.functions())
        if (k.level == 1) lvl1.push_back(k);
    auto r2 = r1.refine({lvl1.front(), lvl1.back()});
    // A marked function never stays active, and no active function has its
    // complete child set active (which would make it a linear combination
    // of finer functions).
    CHECK(!r2.is_active(FnKey{0, 4, 4}));
    CHECK(!r2.is_active(lvl1.front()));
    for (const auto& k : r2.functions()) {
        bool all_children_active = true;
        for (const auto& c : r2.children(k))
            if (!r2.is_active(c)) all_children_active = false;
        CHECK(!all_children_active);
    }
}

TEST_SUITE_END();
