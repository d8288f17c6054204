#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sumprod/search.hpp"

using namespace sumprod;

TEST_CASE("exhaustive search pinned minima") {
    MulStructure m5 = find_primitive_root(5);
    SearchRecord r5 = exhaustive_search(m5, 2);
    CHECK(std::max(r5.sum_size, r5.prod_size) == 3);
    CHECK(r5.witness.elements() == std::vector<std::int64_t>{0, 1});
    CHECK(r5.ratio == Rational(3, 5));

    MulStructure m7 = find_primitive_root(7);
    SearchRecord r7 = exhaustive_search(m7, 2);
    CHECK(std::max(r7.sum_size, r7.prod_size) == 3);

    // forced full set
    SearchRecord rfull = exhaustive_search(m5, 5);
    CHECK(rfull.sum_size == 5);
    CHECK(std::max(rfull.sum_size, rfull.prod_size) == 5);
    CHECK(rfull.witness.card() == 5);

    CHECK_THROWS_AS(exhaustive_search(m5, 0), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_search(m5, 6), std::invalid_argument);
    MulStructure m31 = find_primitive_root(31);
    CHECK_THROWS_AS(exhaustive_search(m31, 2), std::invalid_argument); // over the default limit
}

TEST_CASE("orbit reduction agrees with full enumeration") {
    for (std::int64_t p : {5, 7, 11}) {
        MulStructure m = find_primitive_root(p);
        for (std::int64_t mc = 1; mc <= p; ++mc) {
            SearchConfig reduced, full;
            full.orbit_reduction = false;
            CHECK(exhaustive_search(m, mc, reduced) == exhaustive_search(m, mc, full));
        }
    }
}

TEST_CASE("worker count does not change the record") {
    MulStructure m17 = find_primitive_root(17);
    SearchConfig w1, w4, w8;
    w1.workers = 1;
    w4.workers = 4;
    w8.workers = 8;
    SearchRecord a = exhaustive_search(m17, 3, w1);
    SearchRecord b = exhaustive_search(m17, 3, w4);
    SearchRecord c = exhaustive_search(m17, 3, w8);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("structured search") {
    MulStructure m13 = find_primitive_root(13);
    SearchRecord r = structured_search(m13, 2);
    CHECK(r.ratio <= Rational(3, 13)); // the family contains {1,5}
    CHECK(r.mode == SearchMode::structured);
    validate_record(r, m13);

    MulStructure m101 = find_primitive_root(101);
    SearchRecord r101 = structured_search(m101, 9); // ceil(101/12)
    CHECK(r101.ratio <= Rational(1, 2));            // f(1/12) = 1/2 comparison line
    CHECK(r101.witness.card() >= 9);

    // structured is an upper bound for the exhaustive minimum
    for (std::int64_t p : {5, 7, 11, 13}) {
        MulStructure m = find_primitive_root(p);
        for (std::int64_t mc : {std::int64_t(2), p / 2}) {
            if (mc < 1) continue;
            SearchRecord ex = exhaustive_search(m, mc);
            SearchRecord st = structured_search(m, mc);
            CHECK(ex.ratio <= st.ratio);
        }
    }
}

TEST_CASE("record validation catches tampering") {
    MulStructure m13 = find_primitive_root(13);
    SearchRecord r = structured_search(m13, 2);
    validate_record(r, m13);
    SearchRecord bad = r;
    bad.sum_size += 1;
    CHECK_THROWS_AS(validate_record(bad, m13), std::invalid_argument);
    SearchRecord low = r;
    low.min_card = r.witness.card() + 1;
    CHECK_THROWS_AS(validate_record(low, m13), std::invalid_argument);
}

TEST_CASE("margin report") {
    MulStructure m13 = find_primitive_root(13);
    SearchRecord r = exhaustive_search(m13, 2); // ratio 3/13
    auto rows = theorem_main_margin(r, Rational(1, 100));
    // rows exist for every ell with ratio + eps < 1/ell
    CHECK(!rows.empty());
    Rational beta = r.ratio + Rational(1, 100);
    for (const auto& row : rows) {
        CHECK(beta < Rational(1, row.ell));
        CHECK(row.bound == beta / Rational(2 * (row.ell + 1)));
        CHECK(row.margin == row.bound - row.alpha_witness);
    }

    // ratio >= 1 - eps: no applicable ell
    SearchRecord full = exhaustive_search(m13, 13);
    CHECK(theorem_main_margin(full, Rational(1, 100)).empty());
}
