#include "sumprod/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "sumprod/spectral.hpp"

namespace sumprod {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::flat: return "flat";
        case Branch::linear: return "linear";
        case Branch::saturated: return "saturated";
    }
    return "?";
}

namespace {

Rational objective(const Rational& alpha, std::int64_t ell) {
    Rational lin = Rational(2 * ell) * alpha;
    Rational sat(1, ell);
    return lin >= sat ? lin : sat;
}

void check_alpha(const Rational& alpha) {
    if (!(alpha > Rational(0)) || !(alpha < Rational(1)))
        throw std::invalid_argument("f_alpha: alpha must lie in (0,1)");
}

} // namespace

ThresholdProfile f_alpha(const Rational& alpha) {
    check_alpha(alpha);
    ThresholdProfile out;
    out.alpha = alpha;
    Rational best;
    std::int64_t best_ell = 0;
    for (std::int64_t ell = 1;; ++ell) {
        Rational v = objective(alpha, ell);
        if (best_ell == 0 || v < best) {
            best = v;
            best_ell = ell;
        }
        // objective is nondecreasing once the linear part dominates
        if (Rational(2 * ell) * alpha >= Rational(1, ell)) break;
    }
    out.value = best;
    out.optimal_ell = best_ell;
    if (best == Rational(1))
        out.branch = Branch::flat;
    else if (Rational(1, best_ell) >= Rational(2 * best_ell) * alpha)
        out.branch = Branch::saturated;
    else
        out.branch = Branch::linear;
    return out;
}

Rational f_alpha_bruteforce(const Rational& alpha, std::int64_t ell_limit) {
    check_alpha(alpha);
    // The minimum sits at ell ~ (2 alpha)^{-1/2}; reject ranges that stop short.
    double needed = std::ceil(1.0 / std::sqrt(2.0 * alpha.to_double())) + 1.0;
    if (static_cast<double>(ell_limit) < needed)
        throw std::invalid_argument("f_alpha_bruteforce: ell range too small to bracket the optimum");
    Rational best = objective(alpha, 1);
    for (std::int64_t ell = 2; ell <= ell_limit; ++ell) {
        Rational v = objective(alpha, ell);
        if (v < best) best = v;
    }
    return best;
}

ConstructionReport construct_extremal(const MulStructure& mul, const ConstructionParams& params) {
    if (params.p != mul.p) throw std::invalid_argument("construct_extremal: p mismatch");
    if (params.n_cut < 1 || params.n_cut >= params.p)
        throw std::invalid_argument("construct_extremal: N must lie in [1, p)");
    GSet h = mul_subgroup(mul, params.ell); // validates ell | p-1
    GSet a(h.group());
    for (std::int64_t x = 1; x <= params.n_cut; ++x)
        if (h.contains(x)) a.insert(x);

    ConstructionReport rep;
    rep.witness = a;
    rep.card = a.card();
    rep.sum_size = a.card() ? sumset(a, a).card() : 0;
    rep.prod_size = a.card() ? product_set(a, a, mul).card() : 0;
    // Sums stay in [2, 2N]; products stay in H.
    if (rep.sum_size > std::max<std::int64_t>(2 * params.n_cut - 1, 0))
        throw std::logic_error("construct_extremal: |A+A| exceeds 2N-1 (internal error)");
    if (rep.prod_size > (params.p - 1) / params.ell)
        throw std::logic_error("construct_extremal: |A.A| exceeds |H| (internal error)");
    return rep;
}

PolyaVinogradovReport polya_vinogradov_report(const MulStructure& mul, const ConstructionParams& params) {
    ConstructionReport c = construct_extremal(mul, params);
    PolyaVinogradovReport rep;
    rep.count = c.card;
    rep.n_over_ell = static_cast<double>(params.n_cut) / static_cast<double>(params.ell);
    rep.deviation = std::abs(static_cast<double>(rep.count) - rep.n_over_ell);
    const double p = static_cast<double>(params.p);
    rep.bound = std::sqrt(p) * std::log(p);
    rep.within_bound = rep.deviation <= rep.bound;
    return rep;
}

std::complex<double> gauss_orthogonality(const MulStructure& mul, std::int64_t r, std::int64_t chi_index) {
    const std::int64_t p = mul.p;
    if (r < 0 || r >= p || chi_index < 0 || chi_index >= p - 1)
        throw std::out_of_range("gauss_orthogonality: index out of range");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::complex<double> acc(0, 0);
    for (std::int64_t n = 1; n < p; ++n) {
        double add_phase = static_cast<double>(r * n % p) / static_cast<double>(p);
        double mul_phase = static_cast<double>(chi_index * mul.dlog_of(n) % (p - 1)) / static_cast<double>(p - 1);
        acc += std::polar(1.0, two_pi * (add_phase - mul_phase));
    }
    return acc / static_cast<double>(p);
}

namespace {

struct TruncationTable {
    std::vector<double> l1_prefix; // l1 mass of the top-k coefficients
    std::vector<double> l2_tail;   // L2 error after keeping top-k (sqrt applied)
};

TruncationTable truncation_table(const Spectrum& s) {
    const std::size_t n = s.coeffs.size();
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(s.coeffs[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    TruncationTable t;
    t.l1_prefix.resize(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) t.l1_prefix[k + 1] = t.l1_prefix[k] + mags[k];
    std::vector<double> tail2(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) tail2[k] = tail2[k + 1] + mags[k] * mags[k];
    t.l2_tail.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) t.l2_tail[k] = std::sqrt(std::max(tail2[k], 0.0));
    return t;
}

} // namespace

IntersectReport intersect_estimate(const GSet& a1, const GSet& a2, const MulStructure& mul,
                                   std::int64_t spectral_budget) {
    if (a1.group() != a2.group()) throw std::invalid_argument("intersect_estimate: group mismatch");
    if (!a1.group().prime_cyclic || a1.group().order != mul.p)
        throw std::invalid_argument("intersect_estimate: sets must live on F_p with matching structure");
    if (spectral_budget < 1) throw std::invalid_argument("intersect_estimate: budget must be >= 1");

    const std::int64_t p = mul.p;
    IntersectReport rep;
    rep.actual = (a1 & a2).card();
    rep.predicted = static_cast<double>(a1.card()) * static_cast<double>(a2.card()) / static_cast<double>(p);
    rep.error = std::abs(static_cast<double>(rep.actual) - rep.predicted);

    // Additive side spectrum of 1_{A1}; multiplicative side spectrum of
    // 1_{A2 \ {0}} through the dlog isomorphism onto [p-1].
    Spectrum sa = fourier(to_indicator(a1));
    GroupSpec dl = make_group({p - 1});
    GSet a2m(dl);
    for (std::int64_t x : a2.elements())
        if (x != 0) a2m.insert(mul.dlog_of(x));
    Spectrum sm = fourier(to_indicator(a2m));

    TruncationTable ta = truncation_table(sa);
    TruncationTable tm = truncation_table(sm);
    const double d1 = static_cast<double>(a1.card()) / static_cast<double>(p);
    const double d2 = static_cast<double>(a2.card()) / static_cast<double>(p);
    const double sqrt_p = std::sqrt(static_cast<double>(p));

    double best = -1;
    std::int64_t bk1 = 1, bk2 = 1;
    const std::int64_t kmax1 = std::min<std::int64_t>(spectral_budget, p);
    const std::int64_t kmax2 = std::min<std::int64_t>(spectral_budget, p - 1);
    const double zero_in_a2 = a2.contains(0) ? 1.0 : 0.0;
    for (std::int64_t k1 = 1; k1 <= kmax1; ++k1) {
        const double e1 = ta.l2_tail[static_cast<std::size_t>(k1)];
        const double m1 = ta.l1_prefix[static_cast<std::size_t>(k1)];
        for (std::int64_t k2 = 1; k2 <= kmax2; ++k2) {
            const double e2 = tm.l2_tail[static_cast<std::size_t>(k2)];
            const double m2 = tm.l1_prefix[static_cast<std::size_t>(k2)];
            const double K = std::max({m1, m2, 2.0});
            // |A1/\A2| - |A1||A2|/p, bounded through <f,g>: a K^2/sqrt(p)
            // character-sum term, L2 leakage cross terms (the multiplicative
            // truncation vanishes at 0, hence the extra p^{-1/2} when 0 is in
            // A2), and O(1/p) bookkeeping for the trivial character.
            const double bound = static_cast<double>(p) *
                (K * K / sqrt_p + e1 + (1.0 + e1) * (e2 + zero_in_a2 / sqrt_p) +
                 e1 * (d2 + e2) + d1 * e2 + 16.0 / static_cast<double>(p));
            if (best < 0 || bound < best) {
                best = bound;
                bk1 = k1;
                bk2 = k2;
            }
        }
    }
    rep.fg_bound = best;
    rep.trunc_add = bk1;
    rep.trunc_mul = bk2;
    rep.leak_add = ta.l2_tail[static_cast<std::size_t>(bk1)];
    rep.leak_mul = tm.l2_tail[static_cast<std::size_t>(bk2)];
    rep.k_mass = std::max({ta.l1_prefix[static_cast<std::size_t>(bk1)],
                           tm.l1_prefix[static_cast<std::size_t>(bk2)], 2.0});
    return rep;
}

} // namespace sumprod
