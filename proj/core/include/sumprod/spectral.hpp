#pragma once

#include <complex>
#include <vector>

#include "sumprod/group.hpp"

namespace sumprod {

using cplx = std::complex<double>;

// Normalization is the asymmetric one used throughout: averages on the group
// side, sums on the character side. It is never mixed.
//
//   fhat(gamma) = E_x f(x) e(-gamma(x))        ||f||_p^p    = E_x |f(x)|^p
//   f(x) = sum_gamma fhat(gamma) e(gamma(x))   ||fhat||_p^p = sum |fhat|^p

struct GridFunction {
    GroupSpec group;
    std::vector<cplx> values;
    bool one_bounded = false; // optional claim; set via mark_one_bounded()

    static GridFunction zero(const GroupSpec& g);
    static GridFunction constant(const GroupSpec& g, cplx c);

    // Validates sup|f| <= 1 + 1e-12 and records the claim.
    void mark_one_bounded();
};

struct Spectrum {
    GroupSpec group;
    std::vector<cplx> coeffs;
};

Spectrum fourier(const GridFunction& f);
GridFunction inverse_fourier(const Spectrum& s);

// (f*g)(x) = E_y f(y) g(x-y), computed on the character side.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

// Gowers U^2 norm, via ||f||_{U^2} = ||fhat||_4.
double u2_norm(const GridFunction& f);
double u2_norm(const Spectrum& s);

double lp_norm(const GridFunction& f, double p); // p >= 1
double sup_norm(const GridFunction& f);
double spectrum_l1(const Spectrum& s);
double spectrum_lp(const Spectrum& s, double p);
cplx inner(const GridFunction& f, const GridFunction& g);
cplx spectrum_inner(const Spectrum& a, const Spectrum& b);

namespace detail {
// Unnormalized DFT of one cyclic line: X[r] = sum_x a[x] e(-+ 2 pi i r x / n).
// Radix-2 in place for powers of two, Bluestein otherwise.
void dft_line(std::vector<cplx>& a, bool inverse);
} // namespace detail

} // namespace sumprod
