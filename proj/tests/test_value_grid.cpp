#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hjb/value_grid.hpp"

#include <cmath>

using namespace hjb;

namespace {

ValueGrid tabulate(double k_lo, double k_hi, int n, const std::function<double(double)>& f) {
    auto g = ValueGrid::log_spaced(k_lo, k_hi, n);
    std::vector<double> v;
    for (double k : g.nodes()) v.push_back(f(k));
    g.set_values(std::move(v));
    return g;
}

} // namespace

TEST_CASE("log-spaced construction") {
    const auto g = ValueGrid::log_spaced(0.1, 10.0, 21);
    CHECK(g.size() == 21);
    CHECK(g.k_min() == doctest::Approx(0.1));
    CHECK(g.k_max() == doctest::Approx(10.0));
    CHECK(g.nodes()[10] == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t i = 0; i + 1 < g.size(); ++i) CHECK(g.nodes()[i] < g.nodes()[i + 1]);
}

TEST_CASE("refinement keeps the original nodes") {
    const auto g = ValueGrid::log_spaced(0.1, 10.0, 9);
    const auto r = g.refined();
    CHECK(r.size() == 17);
    for (size_t i = 0; i < g.size(); ++i)
        CHECK(r.nodes()[2 * i] == doctest::Approx(g.nodes()[i]).epsilon(1e-13));
}

TEST_CASE("interpolation reproduces a logarithmic table") {
    const auto g = tabulate(0.1, 10.0, 200, [](double k) { return 20.0 * std::log(k) - 39.9; });
    for (double k : {0.13, 0.7, 1.9, 4.4, 9.2}) {
        CHECK(g.value(k) == doctest::Approx(20.0 * std::log(k) - 39.9).epsilon(1e-6));
        CHECK(g.deriv(k) == doctest::Approx(20.0 / k).epsilon(1e-3));
    }
}

TEST_CASE("derivative of a concave monotone table stays positive and decreasing") {
    const auto g = tabulate(0.1, 10.0, 120, [](double k) { return std::sqrt(k); });
    double prev = 1e300;
    for (double k = 0.12; k < 10.0; k *= 1.07) {
        const double d = g.deriv(k);
        CHECK(d > 0.0);
        CHECK(d <= prev * (1.0 + 1e-9));
        prev = d;
    }
}

TEST_CASE("beyond-grid extension matches linear and logarithmic tails") {
    const auto lin = tabulate(0.1, 10.0, 80, [](double k) { return 3.0 * k; });
    CHECK(lin.value(1e4) == doctest::Approx(3e4).epsilon(1e-6));
    CHECK(lin.deriv(1e4) == doctest::Approx(3.0).epsilon(1e-6));

    const auto lg = tabulate(0.1, 10.0, 400, [](double k) { return 20.0 * std::log(k); });
    CHECK(lg.value(1e6) == doctest::Approx(20.0 * std::log(1e6)).epsilon(2e-2));
    CHECK(lg.deriv(1e6) == doctest::Approx(20.0 / 1e6).epsilon(0.25));
}

TEST_CASE("monotonicity and concavity summaries") {
    const auto good = tabulate(0.1, 10.0, 50, [](double k) { return std::log(k); });
    CHECK(good.nondecreasing());
    CHECK(good.max_convexity_defect() <= 1e-12);

    auto bad = ValueGrid::log_spaced(0.1, 10.0, 50);
    std::vector<double> v(bad.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = bad.nodes()[i] * bad.nodes()[i];  // convex
    bad.set_values(v);
    CHECK(bad.max_convexity_defect() > 1.0);
}

TEST_CASE("node slopes use one-sided differences at the ends") {
    const auto g = tabulate(1.0, 4.0, 4, [](double k) { return 2.0 * k; });
    CHECK(g.node_slope(0) == doctest::Approx(2.0));
    CHECK(g.node_slope(3) == doctest::Approx(2.0));
    CHECK(g.node_slope(1) == doctest::Approx(2.0));
}

TEST_CASE("invalid construction is rejected") {
    CHECK_THROWS_AS(ValueGrid({1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ValueGrid({-1.0, 2.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(ValueGrid({2.0, 1.0}, {0.0, 0.0}), std::invalid_argument);
}
