#pragma once

#include <string>
#include <vector>

#include "sumprod/regularity.hpp"
#include "sumprod/setops.hpp"
#include "sumprod/spectral.hpp"

namespace sumprod {

// Reference implementations, kept independent of the fast paths they check.

// Direct O(n^2) transform per axis from the defining sum.
Spectrum fourier_naive(const GridFunction& f);
GridFunction inverse_fourier_naive(const Spectrum& s);

// (f*g)(x) = E_y f(y) g(x-y) summed literally.
GridFunction convolve_naive(const GridFunction& f, const GridFunction& g);

// Quadruple average E_{x,h1,h2} f(x) conj f(x+h1) conj f(x+h2) f(x+h1+h2),
// O(n^3); restricted to small groups.
double u2_norm_direct(const GridFunction& f);

// Quadratic loop over pairs.
GSet sumset_naive(const GSet& a, const GSet& b);

// Every invariant-factor chain (n1 | n2 | ... ) with order in [2, max_order].
std::vector<std::vector<std::int64_t>> all_abelian_groups(std::int64_t max_order);

struct CheckResult {
    std::string name;
    bool pass = false;
    double ms = 0;
    std::string detail;
};

std::vector<std::string> suite_names();

// Named invariant suites behind `verify`: spectral identities, factor
// Pythagoras, the exhaustive Kneser checks, Gauss magnitudes, the counting
// lemma, and orbit-reduction soundness.
std::vector<CheckResult> run_suite(const std::string& name);

} // namespace sumprod
