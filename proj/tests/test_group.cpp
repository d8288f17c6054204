#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "sumprod/group.hpp"
#include "sumprod/setops.hpp"

using namespace sumprod;

TEST_CASE("make_group basics") {
    GroupSpec g5 = make_group({5});
    CHECK(g5.order == 5);
    CHECK(g5.prime_cyclic);

    GroupSpec g6 = make_group({2, 3});
    CHECK(g6.order == 6);
    // little-endian mixed radix: index 4 <-> (0, 2)
    auto c = g6.coords_of(4);
    CHECK(c == std::vector<std::int64_t>{0, 2});
    CHECK(g6.index_of(c) == 4);

    GroupSpec g16 = make_group({4, 4});
    CHECK(g16.order == 16); // |Ghat| = |G|: one character per element index

    CHECK_THROWS_AS(make_group({1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(make_group({0}), std::invalid_argument);
    CHECK_THROWS_AS(make_group(std::initializer_list<std::int64_t>{1 << 11, 1 << 11}),
                    std::invalid_argument); // exceeds 2^20 cap
}

TEST_CASE("index/coords round-trip") {
    for (auto fac : {std::vector<std::int64_t>{7}, {2, 4}, {3, 6}, {2, 2, 4}}) {
        GroupSpec g = make_group(fac);
        for (std::int64_t i = 0; i < g.order; ++i)
            CHECK(g.index_of(g.coords_of(i)) == i);
    }
}

TEST_CASE("char_phase formula and additivity") {
    GroupSpec g5 = make_group({5});
    CHECK(char_phase(g5, 0, 3) == doctest::Approx(0.0));
    CHECK(char_phase(g5, 1, 2) == doctest::Approx(2.0 / 5));

    // G=[2,3], gamma=(1,1), x=(1,2): 1/2 + 2/3 mod 1 = 1/6
    GroupSpec g6 = make_group({2, 3});
    std::int64_t gamma = g6.index_of(std::vector<std::int64_t>{1, 1});
    std::int64_t x = g6.index_of(std::vector<std::int64_t>{1, 2});
    CHECK(char_phase(g6, gamma, x) == doctest::Approx(1.0 / 6).epsilon(1e-12));

    CHECK_THROWS_AS(char_phase(g6, 6, 0), std::out_of_range);

    std::mt19937_64 rng(99);
    for (auto fac : {std::vector<std::int64_t>{4096}, {64, 64}, {2, 6, 12}}) {
        GroupSpec g = make_group(fac);
        std::uniform_int_distribution<std::int64_t> pick(0, g.order - 1);
        for (int trial = 0; trial < 200; ++trial) {
            std::int64_t ga = pick(rng), a = pick(rng), b = pick(rng);
            double lhs = char_phase(g, ga, g.add(a, b));
            double rhs = std::fmod(char_phase(g, ga, a) + char_phase(g, ga, b), 1.0);
            double diff = std::abs(lhs - rhs);
            diff = std::min(diff, std::abs(1.0 - diff));
            CHECK(diff <= 1e-12);
        }
    }
}

TEST_CASE("character orthogonality") {
    for (auto fac : {std::vector<std::int64_t>{7}, {12}, {2, 3, 4}}) {
        GroupSpec g = make_group(fac);
        for (std::int64_t gamma = 1; gamma < g.order; ++gamma) {
            std::complex<double> acc(0, 0);
            for (std::int64_t x = 0; x < g.order; ++x)
                acc += std::polar(1.0, 2.0 * std::numbers::pi * char_phase(g, gamma, x));
            CHECK(std::abs(acc) / static_cast<double>(g.order) <= 1e-12);
        }
    }
}

TEST_CASE("find_primitive_root") {
    MulStructure m7 = find_primitive_root(7);
    CHECK(m7.primitive_root == 3);
    CHECK(m7.dlog_of(2) == 2); // 3^2 = 2 mod 7

    MulStructure m5 = find_primitive_root(5);
    CHECK(m5.primitive_root == 2);
    CHECK(m5.dlog_of(4) == 2);

    MulStructure m13 = find_primitive_root(13);
    CHECK(m13.dlog_of(8) == 3); // 2^3 = 8

    CHECK_THROWS_AS(find_primitive_root(4), std::invalid_argument);
    CHECK_THROWS_AS(find_primitive_root(2), std::invalid_argument);
    CHECK_THROWS_AS(find_primitive_root(1 << 21), std::invalid_argument);
}

TEST_CASE("dlog round-trip exhaustive") {
    for (std::int64_t p : {5, 7, 13, 101}) {
        MulStructure m = find_primitive_root(p);
        for (std::int64_t x = 1; x < p; ++x) {
            std::int64_t k = m.dlog_of(x);
            CHECK(m.pow_of(k) == x);
        }
        // dlog is a bijection [1,p) -> [0,p-1)
        std::vector<bool> seen(static_cast<std::size_t>(p - 1), false);
        for (std::int64_t x = 1; x < p; ++x) {
            CHECK(!seen[static_cast<std::size_t>(m.dlog_of(x))]);
            seen[static_cast<std::size_t>(m.dlog_of(x))] = true;
        }
    }
}

TEST_CASE("mul_subgroup") {
    MulStructure m13 = find_primitive_root(13);
    GSet h = mul_subgroup(m13, 3);
    CHECK(h.elements() == std::vector<std::int64_t>{1, 5, 8, 12});
    CHECK(h.card() == 4);

    MulStructure m7 = find_primitive_root(7);
    CHECK(mul_subgroup(m7, 2).elements() == std::vector<std::int64_t>{1, 2, 4});
    CHECK(mul_subgroup(m7, 1).card() == 6); // all of F_7^x

    // product-closed
    GSet hh = product_set(h, h, m13);
    CHECK(hh == h);

    CHECK_THROWS_AS(mul_subgroup(m13, 5), std::invalid_argument);
}
