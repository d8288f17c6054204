#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sumprod/regularity.hpp"
#include "sumprod/verify.hpp"

using namespace sumprod;

namespace {

GSet random_set(const GroupSpec& g, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    GSet s(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        if (coin(rng)) s.insert(x);
    return s;
}

GSet interval(const GroupSpec& g, std::int64_t lo, std::int64_t hi) {
    GSet s(g);
    for (std::int64_t x = lo; x < hi; ++x) s.insert(((x % g.order) + g.order) % g.order);
    return s;
}

double energy_of(const GridFunction& f, const Factor& b) {
    GridFunction p = project(f, b);
    double acc = 0;
    for (auto& v : p.values) acc += std::norm(v);
    return acc / static_cast<double>(p.values.size());
}

} // namespace

TEST_CASE("project") {
    GroupSpec g = make_group({12});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    GridFunction f = GridFunction::zero(g);
    for (auto& v : f.values) v = cplx(u(rng), u(rng));

    // one-cell factor -> the global mean
    Factor triv = Factor::trivial(g);
    GridFunction pm = project(f, triv);
    cplx mean(0, 0);
    for (auto& v : f.values) mean += v;
    mean /= 12.0;
    for (auto& v : pm.values) CHECK(std::abs(v - mean) <= 1e-14);

    // singleton factor -> f itself
    std::vector<std::int32_t> singles(12);
    for (int i = 0; i < 12; ++i) singles[static_cast<std::size_t>(i)] = i;
    Factor fine = Factor::from_cells(g, singles);
    GridFunction pf = project(f, fine);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(pf.values[i] - f.values[i]) <= 1e-14);

    // even/odd cells: each value is the parity-class mean
    std::vector<std::int32_t> parity(12);
    for (int i = 0; i < 12; ++i) parity[static_cast<std::size_t>(i)] = i % 2;
    Factor par = Factor::from_cells(g, parity);
    GridFunction pp = project(f, par);
    cplx even(0, 0), odd(0, 0);
    for (int i = 0; i < 12; i += 2) even += f.values[static_cast<std::size_t>(i)];
    for (int i = 1; i < 12; i += 2) odd += f.values[static_cast<std::size_t>(i)];
    even /= 6.0;
    odd /= 6.0;
    for (int i = 0; i < 12; ++i)
        CHECK(std::abs(pp.values[static_cast<std::size_t>(i)] - (i % 2 ? odd : even)) <= 1e-14);

    // idempotent, mean preserving, contractive
    GridFunction pp2 = project(pp, par);
    for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(pp2.values[i] - pp.values[i]) <= 1e-14);
    cplx mean2(0, 0);
    for (auto& v : pp.values) mean2 += v;
    CHECK(std::abs(mean2 / 12.0 - mean) <= 1e-13);
    CHECK(lp_norm(pp, 2.0) <= lp_norm(f, 2.0) + 1e-12);

    CHECK_THROWS_AS(project(GridFunction::zero(make_group({5})), par), std::invalid_argument);
}

TEST_CASE("refine_by_set") {
    GroupSpec g = make_group({24});
    Factor triv = Factor::trivial(g);
    GSet e = interval(g, 0, 10);

    Factor two = refine_by_set(triv, e);
    CHECK(two.cell_count() == 2);
    CHECK(two.refines(triv));

    Factor same = refine_by_set(triv, GSet::full(g));
    CHECK(same.cell_count() == 1);

    std::mt19937_64 rng(5);
    std::vector<std::int32_t> cells(24);
    for (int i = 0; i < 24; ++i)
        cells[static_cast<std::size_t>(i)] = i < 4 ? i : static_cast<std::int32_t>(rng() % 4);
    Factor b = Factor::from_cells(g, cells);
    GSet r = random_set(g, 0.5, rng);
    Factor rb = refine_by_set(b, r);
    CHECK(rb.cell_count() <= 2 * b.cell_count());
    CHECK(rb.refines(b));
    // every new cell sits inside one old cell and is pure in r
    for (std::int64_t x = 0; x < 24; ++x)
        for (std::int64_t y = 0; y < 24; ++y)
            if (rb.cell_of(x) == rb.cell_of(y)) {
                CHECK(b.cell_of(x) == b.cell_of(y));
                CHECK(r.contains(x) == r.contains(y));
            }
}

TEST_CASE("pythagoras gap") {
    GroupSpec g = make_group({10});
    Factor triv = Factor::trivial(g);
    GSet e = interval(g, 0, 3);
    Factor split = refine_by_set(triv, e);

    GridFunction f = to_indicator(e);
    PythagorasGap same = pythagoras_gap(f, split, split);
    CHECK(same.lhs == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(same.rhs == doctest::Approx(0.0).epsilon(1e-15));

    // alpha(1-alpha) with alpha = 3/10
    PythagorasGap gap = pythagoras_gap(f, triv, split);
    CHECK(gap.lhs == doctest::Approx(0.21).epsilon(1e-12));
    CHECK(gap.rhs == doctest::Approx(0.21).epsilon(1e-12));

    // random chains on [36]
    std::mt19937_64 rng(7);
    GroupSpec g36 = make_group({36});
    Factor cur = Factor::trivial(g36);
    GridFunction h = to_indicator(random_set(g36, 0.4, rng));
    for (int step = 0; step < 5; ++step) {
        Factor next = refine_by_set(cur, random_set(g36, 0.5, rng));
        PythagorasGap pg = pythagoras_gap(h, cur, next);
        CHECK(std::abs(pg.lhs - pg.rhs) <= 1e-12);
        cur = next;
    }

    CHECK_THROWS_AS(pythagoras_gap(f, split, triv), std::invalid_argument);
}

TEST_CASE("find_large_character") {
    GroupSpec g = make_group({32});
    // g = 0.5 * character gamma0
    GridFunction f = GridFunction::zero(g);
    for (std::int64_t x = 0; x < 32; ++x)
        f.values[static_cast<std::size_t>(x)] =
            0.5 * std::polar(1.0, 2.0 * std::numbers::pi * char_phase(g, 3, x));
    CHECK(find_large_character(f, 0.5) == 3);

    // interval indicator minus density on [101]: the largest coefficient is r = +-1
    GroupSpec g101 = make_group({101});
    GridFunction h = to_indicator(interval(g101, 0, 51));
    double density = 51.0 / 101.0;
    for (auto& v : h.values) v -= density;
    std::int64_t got = find_large_character(h, 0.2);
    CHECK((got == 1 || got == 100));

    // planted coefficient 0.9 at gamma=7 among noise <= 0.1
    std::mt19937_64 rng(11);
    Spectrum s{g101, std::vector<cplx>(101, cplx(0, 0))};
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    for (auto& c : s.coeffs) c = cplx(u(rng), u(rng));
    s.coeffs[7] = 0.9;
    GridFunction planted = inverse_fourier(s);
    double m = sup_norm(planted);
    if (m > 1.0)
        for (auto& v : planted.values) v /= m;
    CHECK(find_large_character(planted, 0.3) == 7);

    CHECK_THROWS_AS(find_large_character(GridFunction::zero(g), 0.25), std::logic_error);
}

TEST_CASE("level_set") {
    GroupSpec g12 = make_group({12});
    CHECK(level_set(g12, 0, 0.9, 0.25) == GSet::full(g12)); // trivial character, 0 in window
    CHECK(level_set(g12, 1, 0.0, 0.25).elements() == std::vector<std::int64_t>{0, 1, 2, 3});

    GroupSpec g10 = make_group({10});
    CHECK(level_set(g10, 1, 0.9, 0.2).elements() == std::vector<std::int64_t>{0, 1, 9});

    CHECK_THROWS_AS(level_set(g10, 1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("energy increment step") {
    // f = 1_H for the index-2 subgroup of Z2 x Z9: one step reaches the coset factor
    GroupSpec g = make_group({2, 9});
    GSet h(g);
    for (std::int64_t x = 0; x < 18; ++x)
        if (g.coords_of(x)[0] == 0) h.insert(x);
    GridFunction f = to_indicator(h);
    Factor triv = Factor::trivial(g);
    CHECK(energy_of(f, triv) == doctest::Approx(0.25).epsilon(1e-12));

    IncrementChoice choice;
    Factor refined = energy_increment_step(f, triv, 0.3, {}, &choice);
    CHECK(refined.cell_count() == 2);
    CHECK(energy_of(f, refined) == doctest::Approx(0.5).epsilon(1e-12));

    // constant f: the step's precondition fails
    GridFunction c = GridFunction::constant(g, 0.7);
    CHECK_THROWS_AS(energy_increment_step(c, triv, 0.3, {}, nullptr), std::logic_error);

    // interval on [101], delta = 0.25: energy strictly increases by >= c0 delta^8
    GroupSpec g101 = make_group({101});
    GridFunction ind = to_indicator(interval(g101, 0, 51));
    Factor t101 = Factor::trivial(g101);
    RegularityConfig cfg;
    Factor next = energy_increment_step(ind, t101, 0.25, cfg, nullptr);
    double gain = energy_of(ind, next) - energy_of(ind, t101);
    CHECK(gain >= cfg.c0 * std::pow(0.25, 8.0));

    // misconfigured floors surface as errors, never silent degradation
    RegularityConfig bad_corr;
    bad_corr.c1 = 1e9;
    CHECK_THROWS_AS(energy_increment_step(ind, t101, 0.25, bad_corr, nullptr),
                    IncrementFloorError);
    RegularityConfig bad_gain;
    bad_gain.c0 = 1e9;
    CHECK_THROWS_AS(energy_increment_step(ind, t101, 0.25, bad_gain, nullptr),
                    IncrementFloorError);
    CHECK_THROWS_AS(weak_regularity(ind, 0.25, bad_corr), IncrementFloorError);
}

TEST_CASE("weak regularity") {
    // subgroup indicator: one step then exact
    GroupSpec g = make_group({2, 9});
    GSet h(g);
    for (std::int64_t x = 0; x < 18; ++x)
        if (g.coords_of(x)[0] == 0) h.insert(x);
    DecompositionReport rep = weak_regularity(to_indicator(h), 0.3);
    CHECK(rep.iterations <= 1);
    CHECK(rep.final_u2 <= 1e-12);

    // constant function: zero iterations
    DecompositionReport rc = weak_regularity(GridFunction::constant(g, 0.4), 0.3);
    CHECK(rc.iterations == 0);

    // random density-0.3 set on [257] is already U2-uniform at delta = 0.3
    std::mt19937_64 rng(13);
    GroupSpec g257 = make_group({257});
    GSet r = random_set(g257, 0.3, rng);
    DecompositionReport rr = weak_regularity(to_indicator(r), 0.3);
    CHECK(rr.iterations <= 1);
    CHECK(rr.final_u2 <= 0.3);

    // deterministic: identical runs produce identical factors and traces
    DecompositionReport r2 = weak_regularity(to_indicator(r), 0.3);
    CHECK(rr.factor == r2.factor);
    CHECK(rr.energy_trace == r2.energy_trace);

    // energy trace is monotone, bounded by 1, iterations under the cap
    GroupSpec g101 = make_group({101});
    DecompositionReport ri = weak_regularity(to_indicator(interval(g101, 0, 51)), 0.25);
    for (std::size_t i = 1; i < ri.energy_trace.size(); ++i)
        CHECK(ri.energy_trace[i] > ri.energy_trace[i - 1]);
    CHECK(ri.energy_trace.back() <= 1.0 + 1e-12);
    CHECK(ri.iterations <= weak_regularity_iteration_cap(0.25));
    CHECK(ri.final_u2 <= 0.25);

    CHECK_THROWS_AS(weak_regularity(to_indicator(r), 0.7), std::invalid_argument);
}

TEST_CASE("structured superset") {
    // subgroup input: A' = H, both defects zero
    GroupSpec g = make_group({2, 9});
    GSet h(g);
    for (std::int64_t x = 0; x < 18; ++x)
        if (g.coords_of(x)[0] == 0) h.insert(x);
    double delta = std::pow(2.0, -21);
    SupersetReport rep = structured_superset(h, Rational(1, 8), delta);
    CHECK(rep.a_prime == h);
    CHECK(rep.removed_fraction == 0.0);
    CHECK(rep.popular_defect == 0.0);

    // interval of density 0.4 on [211]
    GroupSpec g211 = make_group({211});
    GSet a(g211);
    for (std::int64_t x = 0; x < 84; ++x) a.insert(x);
    SupersetReport ri = structured_superset(a, Rational(1, 8), delta);
    CHECK(ri.removed_fraction <= 1.0 / 8);
    CHECK(ri.popular_defect <= 1.0 / 8);

    // random density-0.3 set
    std::mt19937_64 rng(17);
    GSet r = random_set(g211, 0.3, rng);
    SupersetReport rr = structured_superset(r, Rational(1, 8), delta);
    CHECK(rr.removed_fraction <= 1.0 / 8);
    CHECK(rr.popular_defect <= 1.0 / 8);
    CHECK(rr.a_prime.difference(r).card() + r.difference(rr.a_prime).card() >= 0);

    // the proof constraint is enforced
    CHECK_THROWS_AS(structured_superset(a, Rational(1, 10), 0.4), std::invalid_argument);
}

TEST_CASE("popular restrict") {
    // everything popular: nothing removed
    GroupSpec g5 = make_group({5});
    RestrictReport full = popular_restrict(GSet::full(g5), Rational(2, 5), Rational(1, 5));
    CHECK(full.removed.empty());
    CHECK(full.a_prime == GSet::full(g5));

    // isolated point 50 creates unpopular sums and is removed early
    GroupSpec g101 = make_group({101});
    GSet a(g101);
    for (std::int64_t x = 0; x < 10; ++x) a.insert(x);
    a.insert(50);
    RestrictReport rep = popular_restrict(a, Rational(2, 101), Rational(1, 4));
    CHECK(rep.unpopular_fraction == 0.0);
    bool removed50 = false;
    for (std::int64_t x : rep.removed) removed50 = removed50 || x == 50;
    CHECK(removed50);
    CHECK(rep.a_prime.difference(a).card() == 0); // A' subset of A

    // coset of a subgroup: rep counts are uniform, nothing removed
    GroupSpec g = make_group({2, 9});
    GSet coset(g);
    for (std::int64_t x = 0; x < 18; ++x)
        if (g.coords_of(x)[0] == 1) coset.insert(x);
    RestrictReport rc = popular_restrict(coset, Rational(1, 4), Rational(1, 8));
    CHECK(rc.removed.empty());

    CHECK_THROWS_AS(popular_restrict(a, Rational(0), Rational(1, 8)), std::invalid_argument);
}

TEST_CASE("measurability probe") {
    // E = G: one coefficient, growth value 1
    GroupSpec g = make_group({36});
    std::vector<double> ms{2, 10, 100};
    auto probes = measurability_probe(GSet::full(g), ms);
    for (const auto& p : probes) {
        CHECK(p.truncation_size == 1);
        CHECK(p.achieved_spectral_l1 == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(p.met_target);
    }

    // E = index-2 subgroup of Z2 x Z9: exact with 2 coefficients, l1 mass 1
    GroupSpec g29 = make_group({2, 9});
    GSet h(g29);
    for (std::int64_t x = 0; x < 18; ++x)
        if (g29.coords_of(x)[0] == 0) h.insert(x);
    auto hp = measurability_probe(h, std::vector<double>{1000.0});
    CHECK(hp[0].truncation_size == 2);
    CHECK(hp[0].achieved_spectral_l1 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hp[0].achieved_l2_error <= 1e-3);

    // interval of length ~p/2 on [101], M = 10: curve recorded
    GroupSpec g101 = make_group({101});
    GSet a(g101);
    for (std::int64_t x = 0; x < 50; ++x) a.insert(x);
    auto ip = measurability_probe(a, std::vector<double>{10.0});
    CHECK(ip[0].met_target);
    CHECK(ip[0].achieved_l2_error <= 0.1);
    CHECK(ip[0].truncation_size >= 3);
    CHECK(ip[0].achieved_spectral_l1 >= 1.0);
}

TEST_CASE("counting lemma") {
    std::mt19937_64 rng(19);
    GroupSpec g = make_group({101});
    GSet a = random_set(g, 0.4, rng);

    // residual from a decomposition
    GridFunction f = to_indicator(a);
    DecompositionReport rep = weak_regularity(f, 0.25);
    GridFunction fb = project(f, rep.factor);
    GridFunction g_res = f;
    for (std::size_t i = 0; i < g_res.values.size(); ++i) g_res.values[i] -= fb.values[i];
    CountingReport cr = counting_lemma_report(to_indicator(a), g_res, 0.25);
    CHECK(cr.holds);

    // synthetic g of controlled U2 norm
    std::uniform_real_distribution<double> u(-1, 1);
    GridFunction h = GridFunction::zero(g);
    for (auto& v : h.values) v = cplx(u(rng), u(rng)) * 0.5;
    double delta = u2_norm(h);
    CountingReport cs = counting_lemma_report(to_indicator(a), h, delta);
    CHECK(cs.holds);
}
