#include "sumprod/spectral.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sumprod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx unit(double turns) { return std::polar(1.0, kTwoPi * turns); }

void check_same_group(const GroupSpec& a, const GroupSpec& b, const char* who) {
    if (a != b) throw std::invalid_argument(std::string(who) + ": group mismatch");
}

// Iterative radix-2, n a power of two.
void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 1.0 : -1.0) / static_cast<double>(len);
        const cplx wlen = unit(ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein: arbitrary n through a power-of-two cyclic convolution.
// Chirp exponents j^2/(2n) are reduced mod 2n in integers first, so the
// phase argument stays small and exact at any n used here.
void bluestein(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sgn = inverse ? 1.0 : -1.0;
    std::size_t m = std::bit_ceil(2 * n + 1);

    std::vector<cplx> chirp(n);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % two_n;
        chirp[j] = unit(sgn * static_cast<double>(q) / static_cast<double>(two_n));
    }

    std::vector<cplx> x(m, cplx(0.0, 0.0)), y(m, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) x[j] = a[j] * chirp[j];
    y[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
        y[j] = std::conj(chirp[j]);
        y[m - j] = std::conj(chirp[j]);
    }
    fft_pow2(x, false);
    fft_pow2(y, false);
    for (std::size_t j = 0; j < m; ++j) x[j] *= y[j];
    fft_pow2(x, true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * inv_m * chirp[j];
}

// Apply dft_line along every axis of the mixed-radix layout.
void transform_axes(const GroupSpec& g, std::vector<cplx>& data, bool inverse) {
    std::vector<cplx> line;
    for (std::size_t ax = 0; ax < g.factors.size(); ++ax) {
        const std::int64_t n = g.factors[ax];
        const std::int64_t stride = g.strides[ax];
        const std::int64_t block = stride * n;
        line.resize(static_cast<std::size_t>(n));
        for (std::int64_t base = 0; base < g.order; base += block) {
            for (std::int64_t off = 0; off < stride; ++off) {
                for (std::int64_t t = 0; t < n; ++t)
                    line[static_cast<std::size_t>(t)] = data[static_cast<std::size_t>(base + off + t * stride)];
                detail::dft_line(line, inverse);
                for (std::int64_t t = 0; t < n; ++t)
                    data[static_cast<std::size_t>(base + off + t * stride)] = line[static_cast<std::size_t>(t)];
            }
        }
    }
}

} // namespace

namespace detail {

void dft_line(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (std::has_single_bit(n)) {
        fft_pow2(a, inverse);
    } else {
        bluestein(a, inverse);
    }
}

} // namespace detail

GridFunction GridFunction::zero(const GroupSpec& g) {
    return GridFunction{g, std::vector<cplx>(static_cast<std::size_t>(g.order), cplx(0.0, 0.0)), false};
}

GridFunction GridFunction::constant(const GroupSpec& g, cplx c) {
    return GridFunction{g, std::vector<cplx>(static_cast<std::size_t>(g.order), c), false};
}

void GridFunction::mark_one_bounded() {
    if (sup_norm(*this) > 1.0 + 1e-12)
        throw std::invalid_argument("GridFunction: claimed 1-bounded but sup|f| > 1 + 1e-12");
    one_bounded = true;
}

Spectrum fourier(const GridFunction& f) {
    if (f.values.size() != static_cast<std::size_t>(f.group.order))
        throw std::invalid_argument("fourier: value count does not match group order");
    Spectrum s{f.group, f.values};
    transform_axes(f.group, s.coeffs, false);
    const double inv = 1.0 / static_cast<double>(f.group.order);
    for (auto& c : s.coeffs) c *= inv;
    return s;
}

GridFunction inverse_fourier(const Spectrum& s) {
    if (s.coeffs.size() != static_cast<std::size_t>(s.group.order))
        throw std::invalid_argument("inverse_fourier: coefficient count does not match group order");
    GridFunction f{s.group, s.coeffs, false};
    transform_axes(s.group, f.values, true);
    return f;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    check_same_group(f.group, g.group, "convolve");
    Spectrum a = fourier(f);
    Spectrum b = fourier(g);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] *= b.coeffs[i];
    return inverse_fourier(a);
}

double u2_norm(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& c : s.coeffs) {
        double m = std::norm(c);
        acc += m * m;
    }
    return std::pow(acc, 0.25);
}

double u2_norm(const GridFunction& f) { return u2_norm(fourier(f)); }

double lp_norm(const GridFunction& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc / static_cast<double>(f.values.size()), 1.0 / p);
}

double sup_norm(const GridFunction& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double spectrum_l1(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& c : s.coeffs) acc += std::abs(c);
    return acc;
}

double spectrum_lp(const Spectrum& s, double p) {
    if (p < 1.0) throw std::invalid_argument("spectrum_lp: p < 1");
    double acc = 0.0;
    for (const auto& c : s.coeffs) acc += std::pow(std::abs(c), p);
    return std::pow(acc, 1.0 / p);
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    check_same_group(f.group, g.group, "inner");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) acc += f.values[i] * std::conj(g.values[i]);
    return acc / static_cast<double>(f.values.size());
}

cplx spectrum_inner(const Spectrum& a, const Spectrum& b) {
    check_same_group(a.group, b.group, "spectrum_inner");
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) acc += a.coeffs[i] * std::conj(b.coeffs[i]);
    return acc;
}

} // namespace sumprod
