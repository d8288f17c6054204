#include "sumprod/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sumprod/extremal.hpp"
#include "sumprod/search.hpp"

namespace sumprod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

} // namespace

Spectrum fourier_naive(const GridFunction& f) {
    const GroupSpec& g = f.group;
    Spectrum s{g, std::vector<cplx>(static_cast<std::size_t>(g.order), cplx(0, 0))};
    for (std::int64_t gamma = 0; gamma < g.order; ++gamma) {
        cplx acc(0, 0);
        for (std::int64_t x = 0; x < g.order; ++x)
            acc += f.values[static_cast<std::size_t>(x)] *
                   std::polar(1.0, -kTwoPi * char_phase(g, gamma, x));
        s.coeffs[static_cast<std::size_t>(gamma)] = acc / static_cast<double>(g.order);
    }
    return s;
}

GridFunction inverse_fourier_naive(const Spectrum& s) {
    const GroupSpec& g = s.group;
    GridFunction f = GridFunction::zero(g);
    for (std::int64_t x = 0; x < g.order; ++x) {
        cplx acc(0, 0);
        for (std::int64_t gamma = 0; gamma < g.order; ++gamma)
            acc += s.coeffs[static_cast<std::size_t>(gamma)] *
                   std::polar(1.0, kTwoPi * char_phase(g, gamma, x));
        f.values[static_cast<std::size_t>(x)] = acc;
    }
    return f;
}

GridFunction convolve_naive(const GridFunction& f, const GridFunction& g) {
    if (f.group != g.group) throw std::invalid_argument("convolve_naive: group mismatch");
    const GroupSpec& grp = f.group;
    GridFunction out = GridFunction::zero(grp);
    for (std::int64_t x = 0; x < grp.order; ++x) {
        cplx acc(0, 0);
        for (std::int64_t y = 0; y < grp.order; ++y)
            acc += f.values[static_cast<std::size_t>(y)] *
                   g.values[static_cast<std::size_t>(grp.sub(x, y))];
        out.values[static_cast<std::size_t>(x)] = acc / static_cast<double>(grp.order);
    }
    return out;
}

double u2_norm_direct(const GridFunction& f) {
    const GroupSpec& g = f.group;
    const std::int64_t n = g.order;
    cplx acc(0, 0);
    for (std::int64_t x = 0; x < n; ++x)
        for (std::int64_t h1 = 0; h1 < n; ++h1)
            for (std::int64_t h2 = 0; h2 < n; ++h2) {
                cplx v = f.values[static_cast<std::size_t>(x)] *
                         std::conj(f.values[static_cast<std::size_t>(g.add(x, h1))]) *
                         std::conj(f.values[static_cast<std::size_t>(g.add(x, h2))]) *
                         f.values[static_cast<std::size_t>(g.add(g.add(x, h1), h2))];
                acc += v;
            }
    double avg = acc.real() / (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n));
    return std::pow(std::max(avg, 0.0), 0.25);
}

GSet sumset_naive(const GSet& a, const GSet& b) {
    if (a.group() != b.group()) throw std::invalid_argument("sumset_naive: group mismatch");
    GSet out(a.group());
    for (std::int64_t x : a.elements())
        for (std::int64_t y : b.elements()) out.insert(a.group().add(x, y));
    return out;
}

std::vector<std::vector<std::int64_t>> all_abelian_groups(std::int64_t max_order) {
    // invariant factors n1 | n2 | ... | nk, product <= max_order
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur;
    auto rec = [&](auto&& self, std::int64_t min_factor, std::int64_t product) -> void {
        for (std::int64_t f = min_factor; product * f <= max_order; ++f) {
            // n_{i+1} must be a multiple of n_i
            if (!cur.empty() && f % cur.back() != 0) continue;
            cur.push_back(f);
            out.push_back(cur);
            self(self, f, product * f);
            cur.pop_back();
        }
    };
    rec(rec, 2, 1);
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct SuiteBuilder {
    std::vector<CheckResult> results;

    void run(const std::string& name, auto&& body) {
        CheckResult r;
        r.name = name;
        auto start = Clock::now();
        try {
            std::string detail = body();
            r.pass = true;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        r.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        results.push_back(r);
    }
};

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

GridFunction random_function(const GroupSpec& g, std::mt19937_64& rng, bool one_bounded = true) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction f = GridFunction::zero(g);
    for (auto& v : f.values) {
        v = cplx(u(rng), u(rng));
        if (one_bounded) {
            double m = std::abs(v);
            if (m > 1.0) v /= m;
        }
    }
    return f;
}

GSet random_set(const GroupSpec& g, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    GSet s(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        if (coin(rng)) s.insert(x);
    return s;
}

std::vector<CheckResult> suite_spectral() {
    SuiteBuilder sb;
    std::mt19937_64 rng(0x5eed0001);

    sb.run("parseval-inversion", [&] {
        double worst_p = 0, worst_i = 0;
        for (int trial = 0; trial < 100; ++trial) {
            auto chains = all_abelian_groups(64);
            std::uniform_int_distribution<std::size_t> pick(0, chains.size() - 1);
            std::vector<std::int64_t> fac = chains[pick(rng)];
            GroupSpec g = make_group(fac);
            GridFunction f = random_function(g, rng);
            Spectrum s = fourier(f);
            double l2f = lp_norm(f, 2.0);
            double l2s = std::sqrt(std::norm(spectrum_inner(s, s)));
            worst_p = std::max(worst_p, std::abs(l2f * l2f - l2s));
            GridFunction back = inverse_fourier(s);
            for (std::size_t i = 0; i < f.values.size(); ++i)
                worst_i = std::max(worst_i, std::abs(back.values[i] - f.values[i]));
        }
        expect(worst_p <= 1e-10, "Parseval residual " + fmt(worst_p));
        expect(worst_i <= 1e-10, "inversion residual " + fmt(worst_i));
        std::ostringstream os;
        os << "parseval " << worst_p << ", inversion " << worst_i;
        return os.str();
    });

    sb.run("fft-vs-naive", [&] {
        double worst = 0;
        for (std::int64_t n : {2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 17, 31, 32, 45, 64, 97, 101, 128}) {
            GroupSpec g = make_group({n});
            GridFunction f = random_function(g, rng);
            Spectrum fast = fourier(f);
            Spectrum slow = fourier_naive(f);
            for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
                worst = std::max(worst, std::abs(fast.coeffs[i] - slow.coeffs[i]));
        }
        expect(worst <= 1e-11, "fft mismatch " + fmt(worst));
        return "max |fast - naive| = " + fmt(worst);
    });

    sb.run("convolution-theorem", [&] {
        double worst = 0;
        for (std::int64_t n : {12, 32, 45, 101}) {
            GroupSpec g = make_group({n});
            GridFunction f = random_function(g, rng);
            GridFunction h = random_function(g, rng);
            GridFunction cv = convolve(f, h);
            Spectrum lhs = fourier(cv);
            Spectrum sf = fourier(f), sh = fourier(h);
            for (std::size_t i = 0; i < lhs.coeffs.size(); ++i)
                worst = std::max(worst, std::abs(lhs.coeffs[i] - sf.coeffs[i] * sh.coeffs[i]));
            GridFunction direct = convolve_naive(f, h);
            for (std::size_t i = 0; i < direct.values.size(); ++i)
                worst = std::max(worst, std::abs(direct.values[i] - cv.values[i]));
        }
        expect(worst <= 1e-10, "convolution residual " + fmt(worst));
        return "max residual = " + fmt(worst);
    });

    sb.run("u2-identity", [&] {
        double worst = 0;
        for (auto& fac : all_abelian_groups(24)) {
            GroupSpec g = make_group(fac);
            GridFunction f = random_function(g, rng);
            worst = std::max(worst, std::abs(u2_norm(f) - u2_norm_direct(f)));
        }
        expect(worst <= 1e-9, "u2 identity residual " + fmt(worst));
        return "max residual = " + fmt(worst);
    });

    sb.run("norm-monotonicity", [&] {
        for (int trial = 0; trial < 50; ++trial) {
            GroupSpec g = make_group({64});
            GridFunction f = random_function(g, rng);
            Spectrum s = fourier(f);
            double linf_hat = 0;
            for (auto& c : s.coeffs) linf_hat = std::max(linf_hat, std::abs(c));
            double l1 = lp_norm(f, 1.0), l2 = lp_norm(f, 2.0), linf = sup_norm(f);
            expect(linf_hat <= l1 + 1e-12 && l1 <= l2 + 1e-12 && l2 <= linf + 1e-12,
                   "norm chain violated");
        }
        return std::string("ok");
    });

    return sb.results;
}

std::vector<CheckResult> suite_pythagoras() {
    SuiteBuilder sb;
    std::mt19937_64 rng(0x5eed0002);
    sb.run("refinement-identity", [&] {
        double worst = 0;
        for (std::int64_t p : {31, 101}) {
            GroupSpec g = make_group({p});
            GSet a = random_set(g, 0.4, rng);
            GridFunction f = to_indicator(a);
            DecompositionReport rep = weak_regularity(f, 0.22);
            Factor prev = Factor::trivial(g);
            for (const auto& c : rep.chosen) {
                Factor next = refine_by_set(prev, level_set(g, c.gamma, c.t, c.len));
                PythagorasGap gap = pythagoras_gap(f, prev, next);
                worst = std::max(worst, std::abs(gap.lhs - gap.rhs));
                prev = next;
            }
            expect(prev == rep.factor, "reconstructed chain does not end at the reported factor");
        }
        expect(worst <= 1e-12, "pythagoras residual " + fmt(worst));
        return "max |lhs-rhs| = " + fmt(worst);
    });
    return sb.results;
}

std::vector<CheckResult> suite_kneser() {
    SuiteBuilder sb;
    sb.run("kneser-exhaustive-le-16", [&] {
        std::int64_t sets = 0;
        for (auto& fac : all_abelian_groups(16)) {
            GroupSpec g = make_group(fac);
            const std::int64_t n = g.order;
            for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
                GSet a(g);
                for (std::int64_t x = 0; x < n; ++x)
                    if (mask >> x & 1) a.insert(x);
                KneserReport kr = kneser_check(a);
                expect(kr.holds, "Kneser inequality failed on |G|=" + std::to_string(n));
                for (std::int64_t ell = 1; ell <= 8; ++ell)
                    expect(lemma_kneser_bound(a, ell), "density implication failed");
                ++sets;
            }
        }
        return std::to_string(sets) + " subsets checked";
    });
    return sb.results;
}

std::vector<CheckResult> suite_gauss() {
    SuiteBuilder sb;
    sb.run("gauss-magnitudes", [&] {
        double worst = 0;
        for (std::int64_t p = 3; p <= 101; p += 2) {
            if (!is_prime(p)) continue;
            MulStructure mul = find_primitive_root(p);
            const double target = 1.0 / std::sqrt(static_cast<double>(p));
            for (std::int64_t chi = 1; chi < p - 1; ++chi)
                for (std::int64_t r = 1; r < p; ++r)
                    worst = std::max(worst,
                                     std::abs(std::abs(gauss_orthogonality(mul, r, chi)) - target));
        }
        expect(worst <= 1e-10, "gauss magnitude residual " + fmt(worst));
        return "max | |sum| - p^{-1/2} | = " + fmt(worst);
    });
    return sb.results;
}

std::vector<CheckResult> suite_counting() {
    SuiteBuilder sb;
    std::mt19937_64 rng(0x5eed0003);
    sb.run("counting-lemma", [&] {
        GroupSpec g = make_group({211});
        int ran = 0;
        for (int trial = 0; trial < 40; ++trial) {
            GridFunction f = random_function(g, rng);
            // g with controlled U2 norm: rescale a random function
            GridFunction h = random_function(g, rng);
            double delta = 0.1 + 0.2 * (trial % 5) / 4.0;
            double u = u2_norm(h);
            double scale = std::min(1.0, delta / u);
            for (auto& v : h.values) v *= scale;
            CountingReport rep = counting_lemma_report(f, h, delta);
            expect(rep.holds, "counting lemma violated");
            ++ran;
        }
        return std::to_string(ran) + " synthetic pairs";
    });
    return sb.results;
}

std::vector<CheckResult> suite_orbit() {
    SuiteBuilder sb;
    sb.run("orbit-reduction-soundness", [&] {
        for (std::int64_t p : {5, 7, 11, 13}) {
            MulStructure mul = find_primitive_root(p);
            for (std::int64_t mc = 1; mc <= p; ++mc) {
                SearchConfig with, without;
                without.orbit_reduction = false;
                SearchRecord a = exhaustive_search(mul, mc, with);
                SearchRecord b = exhaustive_search(mul, mc, without);
                expect(a == b, "orbit-reduced and full enumerations disagree at p=" +
                                   std::to_string(p) + " min_card=" + std::to_string(mc));
            }
        }
        return std::string("p in {5,7,11,13}, all cardinality floors");
    });
    return sb.results;
}

} // namespace

std::vector<std::string> suite_names() {
    return {"spectral", "pythagoras", "kneser", "gauss", "counting", "orbit"};
}

std::vector<CheckResult> run_suite(const std::string& name) {
    if (name == "spectral") return suite_spectral();
    if (name == "pythagoras") return suite_pythagoras();
    if (name == "kneser") return suite_kneser();
    if (name == "gauss") return suite_gauss();
    if (name == "counting") return suite_counting();
    if (name == "orbit") return suite_orbit();
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const auto& n : suite_names()) {
            auto part = run_suite(n);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

} // namespace sumprod
