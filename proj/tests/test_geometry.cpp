#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ntn/errors.hpp"
#include "ntn/geometry.hpp"

using namespace ntn;

namespace {

// Independent reference: solve the triangle Earth centre / UE / satellite with
// the law of cosines, (R + h)^2 = R^2 + d^2 - 2 R d cos(90 + alpha), by bisection.
double slant_range_by_bisection(double alpha_deg, double h, double re = kEarthRadiusKm) {
    const double angle = (90.0 + alpha_deg) * std::acos(-1.0) / 180.0;
    auto f = [&](double d) { return re * re + d * d - 2 * re * d * std::cos(angle) - (re + h) * (re + h); };
    double lo = 0.0, hi = 20000.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SatelliteGeometry<double> at(double h) { return {h, kEarthRadiusKm}; }

} // namespace

TEST_CASE("slant range at reference points") {
    CHECK(slant_range(90.0, at(600)) == doctest::Approx(600.0).epsilon(1e-12));
    CHECK(std::abs(slant_range(70.0, at(800)) - 845.0) <= 1.0);
    CHECK(slant_range(70.0, at(800)) == doctest::Approx(845.140075414503).epsilon(1e-12));
    CHECK(slant_range(40.0, at(600)) == doctest::Approx(882.335864736399).epsilon(1e-12));
    CHECK(slant_range(80.0, at(500)) == doctest::Approx(507.140228891184).epsilon(1e-12));
}

TEST_CASE("slant range matches the law-of-cosines solution") {
    for (double h : {300.0, 450.0, 600.0, 800.0, 1200.0})
        for (double a = 5.0; a <= 90.0; a += 5.0)
            CHECK(std::abs(slant_range(a, at(h)) - slant_range_by_bisection(a, h)) < 1e-6);
}

TEST_CASE("slant range rejects elevations outside (0, 90]") {
    for (double a : {0.0, -1.0, 90.5, 180.0, std::nan("")}) CHECK_THROWS_AS(slant_range(a, at(600)), DomainError);
    CHECK_THROWS_AS(slant_range(45.0, at(0)), DomainError);
    CHECK_THROWS_AS(slant_range(45.0, at(-5)), DomainError);
    Eigen::ArrayXd bad(2);
    bad << 45.0, 0.0;
    CHECK_THROWS_AS(slant_range(bad, at(600)), DomainError);
}

TEST_CASE("slant range decreases with elevation and increases with altitude") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> elev(0.01, 90.0), alt(200.0, 2000.0);
    for (int i = 0; i < 1000; ++i) {
        double a1 = elev(rng), a2 = elev(rng);
        if (a1 > a2) std::swap(a1, a2);
        const double h = alt(rng);
        if (a1 < a2) CHECK(slant_range(a1, at(h)) > slant_range(a2, at(h)));
        double h1 = alt(rng), h2 = alt(rng);
        if (h1 > h2) std::swap(h1, h2);
        if (h1 < h2) CHECK(slant_range(a1, at(h1)) < slant_range(a1, at(h2)));
    }
}

TEST_CASE("zenith slant range equals altitude") {
    for (double h = 100.0; h <= 2000.0; h += 50.0) CHECK(std::abs(slant_range(90.0, at(h)) - h) < 1e-9);
}

TEST_CASE("array overloads agree with scalar evaluation") {
    Eigen::ArrayXd alpha = Eigen::ArrayXd::LinSpaced(50, 10.0, 90.0);
    const Eigen::ArrayXd d = slant_range(alpha, at(550));
    const Eigen::ArrayXd tau = propagation_delay(d);
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        CHECK(d(i) == doctest::Approx(slant_range(alpha(i), at(550))).epsilon(1e-13));
        CHECK(tau(i) == doctest::Approx(propagation_delay(d(i))).epsilon(1e-13));
    }
}

TEST_CASE("propagation delay") {
    CHECK(propagation_delay(299.792458) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(propagation_delay(slant_range(70.0, at(800))) - 2.82) <= 0.01);
    CHECK(std::abs(propagation_delay(slant_range(90.0, at(600))) - 2.00) <= 0.01);
    CHECK(propagation_delay(slant_range(40.0, at(600))) == doctest::Approx(2.94315564381676).epsilon(1e-12));
    CHECK(round_trip(propagation_delay(845.0)) == doctest::Approx(5.6374).epsilon(1e-4));
    CHECK_THROWS_AS(propagation_delay(0.0), DomainError);
    CHECK_THROWS_AS(propagation_delay(-3.0), DomainError);
}

TEST_CASE("delay extremes of a population") {
    Eigen::ArrayXd alpha(3);
    alpha << 40.0, 90.0, 65.0;
    const auto ues = make_ues(alpha, at(600));
    REQUIRE(ues.size() == 3);
    CHECK(ues[2].ue_id == 2);
    const auto ext = delay_extremes(ues);
    CHECK(ext.tau_min_ms == doctest::Approx(2.00138457118891).epsilon(1e-12));
    CHECK(ext.tau_max_ms == doctest::Approx(2.94315564381676).epsilon(1e-12));
    CHECK(ext.spread_ms() == doctest::Approx(0.9418).epsilon(1e-3));

    const auto single = delay_extremes(std::span(ues).subspan(2, 1));
    CHECK(single.tau_min_ms == single.tau_max_ms);
    CHECK_THROWS_AS(delay_extremes({}), DomainError);
}

TEST_CASE("delay extremes are attained and bound every member") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> elev(10.0, 90.0);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::ArrayXd alpha(1 + trial % 20);
        for (auto& a : alpha) a = elev(rng);
        const auto ues = make_ues(alpha, at(700));
        const auto ext = delay_extremes(ues);
        bool has_min = false, has_max = false;
        for (const auto& u : ues) {
            CHECK(u.delay_ms >= ext.tau_min_ms);
            CHECK(u.delay_ms <= ext.tau_max_ms);
            has_min |= u.delay_ms == ext.tau_min_ms;
            has_max |= u.delay_ms == ext.tau_max_ms;
        }
        CHECK(has_min);
        CHECK(has_max);
    }
}
