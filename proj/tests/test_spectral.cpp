#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sumprod/setops.hpp"
#include "sumprod/spectral.hpp"
#include "sumprod/verify.hpp"

using namespace sumprod;

namespace {

GridFunction random_fn(const GroupSpec& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    GridFunction f = GridFunction::zero(g);
    for (auto& v : f.values) v = cplx(u(rng), u(rng));
    return f;
}

} // namespace

TEST_CASE("delta and constant transforms") {
    GroupSpec g = make_group({8});
    GridFunction delta = GridFunction::zero(g);
    delta.values[0] = 1.0;
    Spectrum s = fourier(delta);
    for (auto& c : s.coeffs) CHECK(std::abs(c - cplx(1.0 / 8, 0)) <= 1e-14);

    GridFunction one = GridFunction::constant(g, 1.0);
    Spectrum s1 = fourier(one);
    CHECK(std::abs(s1.coeffs[0] - cplx(1, 0)) <= 1e-14);
    for (std::size_t i = 1; i < s1.coeffs.size(); ++i) CHECK(std::abs(s1.coeffs[i]) <= 1e-14);
}

TEST_CASE("fast transform matches the naive oracle") {
    std::mt19937_64 rng(7);
    for (std::int64_t n : {2, 3, 5, 6, 9, 12, 16, 17, 31, 45, 64, 97, 101, 128, 211, 256}) {
        GroupSpec g = make_group({n});
        GridFunction f = random_fn(g, rng);
        Spectrum fast = fourier(f);
        Spectrum slow = fourier_naive(f);
        double worst = 0;
        for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
            worst = std::max(worst, std::abs(fast.coeffs[i] - slow.coeffs[i]));
        CAPTURE(n);
        CHECK(worst <= 1e-11);
    }
    // multi-factor group
    GroupSpec g = make_group({4, 6, 9});
    GridFunction f = random_fn(g, rng);
    Spectrum fast = fourier(f);
    Spectrum slow = fourier_naive(f);
    for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
        CHECK(std::abs(fast.coeffs[i] - slow.coeffs[i]) <= 1e-11);
}

TEST_CASE("parseval and inversion on random [64]") {
    std::mt19937_64 rng(11);
    GroupSpec g = make_group({64});
    GridFunction f = random_fn(g, rng);
    Spectrum s = fourier(f);
    double lhs = lp_norm(f, 2.0);
    double rhs = std::sqrt(spectrum_inner(s, s).real());
    CHECK(std::abs(lhs - rhs) <= 1e-10);
    GridFunction back = inverse_fourier(s);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(back.values[i] - f.values[i]) <= 1e-10);
}

TEST_CASE("convolution") {
    GroupSpec g5 = make_group({5});
    GSet a = GSet::of(g5, {0, 1});
    GridFunction conv = convolve(to_indicator(a), to_indicator(a));
    CHECK(std::abs(conv.values[1] - cplx(2.0 / 5, 0)) <= 1e-12); // pairs (0,1),(1,0)

    // f * (n * delta_0) = f
    std::mt19937_64 rng(13);
    GroupSpec g = make_group({32});
    GridFunction f = random_fn(g, rng);
    GridFunction mass = GridFunction::zero(g);
    mass.values[0] = static_cast<double>(g.order);
    GridFunction same = convolve(f, mass);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(same.values[i] - f.values[i]) <= 1e-10);

    // transform identity against the naive O(n^2) oracle
    GridFunction h = random_fn(g, rng);
    GridFunction fast = convolve(f, h);
    GridFunction slow = convolve_naive(f, h);
    for (std::size_t i = 0; i < fast.values.size(); ++i)
        CHECK(std::abs(fast.values[i] - slow.values[i]) <= 1e-10);
    Spectrum sc = fourier(fast), sf = fourier(f), sh = fourier(h);
    for (std::size_t i = 0; i < sc.coeffs.size(); ++i)
        CHECK(std::abs(sc.coeffs[i] - sf.coeffs[i] * sh.coeffs[i]) <= 1e-10);

    GroupSpec g7 = make_group({7});
    CHECK_THROWS_AS(convolve(f, GridFunction::zero(g7)), std::invalid_argument);
}

TEST_CASE("u2 norm") {
    GroupSpec g = make_group({24});
    CHECK(u2_norm(GridFunction::constant(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));

    // a pure character also has U2 norm 1
    GridFunction chi = GridFunction::zero(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        chi.values[static_cast<std::size_t>(x)] =
            std::polar(1.0, 2.0 * std::numbers::pi * char_phase(g, 5, x));
    CHECK(u2_norm(chi) == doctest::Approx(1.0).epsilon(1e-12));

    // random +-1 function on [64]: spectral value equals the direct O(n^3) average
    std::mt19937_64 rng(17);
    GroupSpec g64 = make_group({64});
    GridFunction f = GridFunction::zero(g64);
    std::bernoulli_distribution coin(0.5);
    for (auto& v : f.values) v = coin(rng) ? 1.0 : -1.0;
    CHECK(std::abs(u2_norm(f) - u2_norm_direct(f)) <= 1e-9);
}

TEST_CASE("norms and inner products") {
    GroupSpec g = make_group({48});
    GSet a = GSet::of(g, {1, 5, 9, 40});
    GridFunction ind = to_indicator(a);
    double l2 = lp_norm(ind, 2.0);
    CHECK(l2 * l2 == doctest::Approx(4.0 / 48).epsilon(1e-12)); // ||1_A||_2^2 = |A|/|G|

    GridFunction chi = GridFunction::zero(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        chi.values[static_cast<std::size_t>(x)] =
            std::polar(1.0, 2.0 * std::numbers::pi * char_phase(g, 7, x));
    CHECK(spectrum_l1(fourier(chi)) == doctest::Approx(1.0).epsilon(1e-10));

    std::mt19937_64 rng(23);
    GridFunction f = random_fn(g, rng), h = random_fn(g, rng);
    cplx lhs = inner(f, h);
    cplx rhs = spectrum_inner(fourier(f), fourier(h));
    CHECK(std::abs(lhs - rhs) <= 1e-10); // Plancherel

    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(spectrum_lp(fourier(f), 0.9), std::invalid_argument);
}

TEST_CASE("norm chain") {
    // sup|ghat| <= ||g||_1 <= ||g||_2 <= ||g||_inf
    std::mt19937_64 rng(29);
    GroupSpec g = make_group({60});
    for (int trial = 0; trial < 30; ++trial) {
        GridFunction f = random_fn(g, rng);
        Spectrum s = fourier(f);
        double linf_hat = 0;
        for (auto& c : s.coeffs) linf_hat = std::max(linf_hat, std::abs(c));
        CHECK(linf_hat <= lp_norm(f, 1.0) + 1e-12);
        CHECK(lp_norm(f, 1.0) <= lp_norm(f, 2.0) + 1e-12);
        CHECK(lp_norm(f, 2.0) <= sup_norm(f) + 1e-12);
    }
}

TEST_CASE("one-bounded flag validates") {
    GroupSpec g = make_group({4});
    GridFunction f = GridFunction::constant(g, 2.0);
    CHECK_THROWS_AS(f.mark_one_bounded(), std::invalid_argument);
    GridFunction h = GridFunction::constant(g, 0.5);
    h.mark_one_bounded();
    CHECK(h.one_bounded);
}
