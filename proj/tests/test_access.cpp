#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kaccess/access.hpp"
#include "kaccess/error.hpp"

using namespace kaccess;

TEST_CASE("access_from_time examples") {
    CHECK(access_from_time(TimeCost::of(0.0)) == 1.0);
    CHECK(access_from_time(TimeCost::unreachable(), 1e-8) == 1e-8);
    CHECK(access_from_time(TimeCost::of(1.0)) == doctest::Approx(0.367879441171442).epsilon(1e-12));
    // exp(-30) ~ 9.4e-14 is below the floor
    CHECK(access_from_time(TimeCost::of(30.0)) == kDefaultFloor);
}

TEST_CASE("TimeCost rejects negative and non-finite seconds") {
    CHECK_THROWS_AS(TimeCost::of(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(TimeCost::of(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(TimeCost::of(INFINITY), std::invalid_argument);
    CHECK_FALSE(TimeCost::unreachable().reachable());
    CHECK_THROWS(TimeCost::unreachable().seconds());
}

TEST_CASE("access_from_time is monotone and round-trips") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> t(0.0, 25.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double t1 = t(rng), t2 = t(rng);
        if (t1 > t2) std::swap(t1, t2);
        const double a1 = access_from_time(TimeCost::of(t1));
        const double a2 = access_from_time(TimeCost::of(t2));
        CHECK(a1 >= a2);
        if (t1 < t2 && a1 == a2) CHECK(a1 == kDefaultFloor);
    }
    std::uniform_real_distribution<double> u(std::log(kDefaultFloor), 0.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = std::exp(u(rng));
        if (a <= kDefaultFloor) continue;
        const double back = access_from_time(TimeCost::of(-std::log(a)));
        CHECK(std::abs(back - a) <= 1e-12 * a);
    }
}

TEST_CASE("validate_matrix") {
    AccessibilityMatrix a(4);
    a(0, 1) = 0.3;
    a(3, 2) = 1e-8;
    CHECK(validate_matrix(a).ok());
    CHECK_NOTHROW(require_valid(a));

    SUBCASE("diagonal") {
        a(2, 2) = 0.9;
        auto r = validate_matrix(a);
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].kind == Violation::Kind::DiagonalNotOne);
        CHECK(r.errors[0].message.find("diagonal != 1 at index 2") != std::string::npos);
        CHECK_THROWS_AS(require_valid(a), InvariantError);
    }
    SUBCASE("out of range") {
        a(0, 1) = 1.5;
        auto r = validate_matrix(a);
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].kind == Violation::Kind::OutOfRange);
        CHECK(r.errors[0].message.find("entry out of range") != std::string::npos);
        CHECK(r.errors[0].row == 0);
        CHECK(r.errors[0].col == 1);
    }
    SUBCASE("below floor") {
        a(1, 0) = 0.0;
        CHECK_FALSE(validate_matrix(a).ok());
    }
    SUBCASE("non-finite") {
        a(1, 2) = std::nan("");
        CHECK(validate_matrix(a).errors.at(0).kind == Violation::Kind::NotFinite);
    }
    SUBCASE("zero-time transition is a warning") {
        a(1, 2) = 1.0;
        auto r = validate_matrix(a);
        CHECK(r.ok());
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.warnings[0].kind == Violation::Kind::DuplicateState);
    }
    SUBCASE("empty") {
        CHECK_FALSE(validate_matrix(AccessibilityMatrix{}).ok());
    }
}

TEST_CASE("matrix is not symmetrised") {
    AccessibilityMatrix a(2);
    a(0, 1) = 0.9;
    a(1, 0) = 0.01;
    CHECK(a(0, 1) != a(1, 0));
    CHECK(validate_matrix(a).ok());
    CHECK_THROWS_AS(AccessibilityMatrix(3, std::vector<double>(8, 1.0)), std::invalid_argument);
}

TEST_CASE("validate_states") {
    std::vector<StateVector> s{{0, {0.1, 0.2}}, {1, {0.3, 0.4}}};
    CHECK(validate_states(s).ok());
    s.push_back({2, {0.5}});
    CHECK_FALSE(validate_states(s).ok());
    s.back().values = {0.5, std::nan("")};
    CHECK_FALSE(validate_states(s).ok());
    s.back().values = {0.1, 0.2};
    auto r = validate_states(s);
    CHECK(r.ok());
    CHECK(r.warnings.size() == 1);
}
