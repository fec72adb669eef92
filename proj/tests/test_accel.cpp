#include <doctest.h>

#include <cmath>
#include <vector>

#include "helmspec/accel.hpp"
#include "helmspec/errors.hpp"
#include "helmspec/experiments.hpp"
#include "oracles.hpp"

using namespace helmspec;

namespace {

const std::vector<double> kAlpha2 = {7.76924315857119, 7.73502742410347, 7.73341903683425, 7.73334058319427,
                                     7.73333673246089, 7.73333654324603, 7.73333653394665, 7.73333653348959,
                                     7.73333653346713, 7.73333653346602};
const std::vector<double> kAlphaHalf = {9.69310365089956, 9.68737359122776, 9.68702664891476, 9.68700556297997,
                                        9.68700428051026, 9.68700420249783, 9.68700419775222, 9.68700419746353,
                                        9.68700419744597, 9.68700419744490};

}  // namespace

TEST_CASE("single transform examples") {
    std::vector<double> geo;
    for (int n = 0; n <= 4; ++n) geo.push_back(1.0 + std::ldexp(1.0, -n));
    for (const auto& e : shanks_once(geo)) {
        CHECK(e.valid);
        CHECK(e.value == 1.0);
    }
    const std::vector<double> t1 = {9.21037410544234, 9.19238760347104, 9.19138111461443};
    const auto s = shanks_once(t1);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0].value - 9.19132145507167) <= 1e-13);

    const std::vector<double> flat(5, 3.25);
    for (const auto& e : shanks_once(flat)) {
        CHECK_FALSE(e.valid);
        CHECK(e.value == 3.25);
    }
}

TEST_CASE("too-short input") {
    const std::vector<double> two = {1.0, 2.0};
    try {
        (void)shanks_once(two);
        FAIL("expected TooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooShort);
    }
    CHECK_THROWS_AS(shanks_table(two, 3), Error);
}

TEST_CASE("tables of the Rayleigh columns") {
    const auto t2 = shanks_table(kAlpha2, 3);
    REQUIRE(t2.levels.size() == 3);
    CHECK(t2.levels[0].size() == 8);
    CHECK(t2.levels[1].size() == 6);
    CHECK(t2.levels[2].size() == 4);
    CHECK(std::abs(t2.levels[1][2].value - 7.73333653346597) <= 1e-13);
    const auto th = shanks_table(kAlphaHalf, 3);
    CHECK(std::abs(th.levels[2][0].value - 9.68700419744483) <= 1e-13);
    CHECK(std::abs(th.best_estimate() - 9.68700419744483) <= 1e-13);

    // levels stop once fewer than three entries remain
    const std::vector<double> five = {1.0, 0.5, 0.3, 0.2, 0.15};
    CHECK(shanks_table(five, 10).levels.size() == 2);
}

TEST_CASE("alternating sequence") {
    std::vector<double> alt;
    for (int n = 0; n < 8; ++n) alt.push_back(n % 2 ? -1.0 : 1.0);
    const auto t = shanks_table(alt, 2);
    for (const auto& e : t.levels[0]) {
        CHECK(e.valid);
        CHECK(e.value == 0.0);
    }
    for (const auto& e : t.levels[1]) CHECK((!e.valid || e.value == 0.0));
}

TEST_CASE("invalid entries are counted and skipped by the best estimate") {
    const std::vector<double> seq = {2.0, 1.5, 1.25, 1.125, 1.0625};
    const auto t = shanks_table(seq, 2);
    CHECK(t.levels[0][0].valid);
    CHECK(t.invalid_count() == static_cast<int>(t.levels[1].size()));
    CHECK(t.best_estimate() == 1.0);
}

TEST_CASE("property: one level is exact on geometric sequences") {
    oracle::Sampler rng(51);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = rng.uniform(-10.0, 10.0), b = rng.uniform(-5.0, 5.0);
        double r = rng.uniform(0.05, 0.9);
        if (rng.integer(0, 1)) r = -r;
        if (std::abs(b) < 1e-3) continue;
        std::vector<double> s;
        for (int n = 0; n < 6; ++n) s.push_back(a + b * std::pow(r, n));
        for (const auto& e : shanks_once(s)) {
            if (!e.valid) continue;
            CHECK(std::abs(e.value - a) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST_CASE("property: shift equivariance") {
    oracle::Sampler rng(52);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> s;
        double v = rng.uniform(-1.0, 1.0);
        for (int n = 0; n < 7; ++n) {
            v += rng.uniform(-1.0, 1.0) * std::pow(0.6, n);
            s.push_back(v);
        }
        const double c = rng.uniform(-5.0, 5.0);
        std::vector<double> shifted;
        for (double x : s) shifted.push_back(x + c);
        const auto a = shanks_once(s), b = shanks_once(shifted);
        for (std::size_t j = 0; j < a.size(); ++j) {
            // well-conditioned entries only: correction term not dominated by cancellation
            const double d2 = s[j + 2] - 2.0 * s[j + 1] + s[j];
            if (!a[j].valid || std::abs(d2) < 1e-3) continue;
            CHECK(std::abs(b[j].value - (a[j].value + c)) <= 1e-12 * std::max(1.0, std::abs(a[j].value) + std::abs(c)));
        }
    }
}

TEST_CASE("each level improves the parabolic-string estimates") {
    const double alphas[3] = {0.5, 1.0, 2.0};
    const double limits[3] = {9.68700419744483, 9.19132057218719, 7.73333653346597};
    for (int i = 0; i < 3; ++i) {
        const auto col = table1_column(alphas[i], 10, 3);
        const double limit = limits[i];
        double prev = std::abs(col.rayleigh.back() - limit);
        for (const auto& level : col.shanks.levels) {
            const double err = std::abs(level.back().value - limit);
            CHECK(err <= prev + 1e-13);
            prev = err;
        }
    }
}
