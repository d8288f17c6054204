#pragma once

#include <complex>
#include <cstdint>

#include "sumprod/group.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/setops.hpp"

namespace sumprod {

enum class Branch { flat, linear, saturated };

const char* branch_name(Branch b);

struct ThresholdProfile {
    Rational alpha;
    Rational value;        // min over ell of max(2*ell*alpha, 1/ell)
    std::int64_t optimal_ell = 1;
    Branch branch = Branch::flat;
};

// Exact evaluation of the extremal constant; the scan stops at the first ell
// with 2*ell*alpha >= 1/ell, past which the objective only grows.
ThresholdProfile f_alpha(const Rational& alpha);

// Direct minimum over ell in [1, L]; oracle for f_alpha. L must reach past
// the optimum, i.e. L >= ceil((2 alpha)^{-1/2}) + 1.
Rational f_alpha_bruteforce(const Rational& alpha, std::int64_t ell_limit);

struct ConstructionParams {
    std::int64_t p = 0;
    std::int64_t ell = 1;   // must divide p-1
    std::int64_t n_cut = 0; // N in [1, p)
};

struct ConstructionReport {
    GSet witness;           // A = [1,N] /\ H
    std::int64_t card = 0;
    std::int64_t sum_size = 0;
    std::int64_t prod_size = 0;
};

// A = [1,N] /\ H for the index-ell multiplicative subgroup H. The report
// asserts |A+A| <= 2N-1 and |A.A| <= (p-1)/ell.
ConstructionReport construct_extremal(const MulStructure& mul, const ConstructionParams& params);

struct PolyaVinogradovReport {
    std::int64_t count = 0;    // |A|
    double n_over_ell = 0;
    double deviation = 0;      // | |A| - N/ell |
    double bound = 0;          // sqrt(p) ln p
    bool within_bound = false; // reported, not fatal
};

PolyaVinogradovReport polya_vinogradov_report(const MulStructure& mul, const ConstructionParams& params);

// E_{n in F_p} e_p(r n) conj(chi(n)) with chi(0) = 0; chi indexed through the
// dlog structure, chi_j(g^k) = e(j k / (p-1)). Magnitude p^{-1/2} exactly for
// nontrivial chi and r != 0.
std::complex<double> gauss_orthogonality(const MulStructure& mul, std::int64_t r, std::int64_t chi_index);

struct IntersectReport {
    std::int64_t actual = 0;
    double predicted = 0;   // |A1||A2|/p
    double error = 0;
    double fg_bound = 0;    // rigorous bound from the truncation machinery
    double k_mass = 0;      // max of the two truncation l1 masses (>= 2)
    std::int64_t trunc_add = 0;
    std::int64_t trunc_mul = 0;
    double leak_add = 0;    // L2 truncation error, additive side
    double leak_mul = 0;    // L2 truncation error, multiplicative side
};

// Additive x multiplicative intersection estimate: compares |A1 /\ A2| with
// |A1||A2|/p and certifies the error by the best spectral-truncation bound
// within the budget.
IntersectReport intersect_estimate(const GSet& a1, const GSet& a2, const MulStructure& mul,
                                   std::int64_t spectral_budget);

} // namespace sumprod
