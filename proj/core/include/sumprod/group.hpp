#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sumprod {

/**
 * A finite abelian group G = Z_{n1} x ... x Z_{nk} given by its invariant
 * factors. Elements and characters share one indexing scheme: mixed radix,
 * little-endian on the factor list, so
 *
 *   index = x1 + n1*(x2 + n2*(x3 + ...)),   0 <= xi < ni.
 *
 * The character with coordinates (r1,...,rk) acts by
 * gamma(x) = sum_i ri*xi/ni mod 1, computed exactly with denominator |G|.
 */
struct GroupSpec {
    std::vector<std::int64_t> factors;
    std::vector<std::int64_t> strides;
    std::int64_t order = 1;
    bool prime_cyclic = false;

    static constexpr std::int64_t kDefaultMaxOrder = std::int64_t(1) << 20;

    bool cyclic() const { return factors.size() == 1; }

    std::vector<std::int64_t> coords_of(std::int64_t index) const;
    std::int64_t index_of(std::span<const std::int64_t> coords) const;

    std::int64_t add(std::int64_t a, std::int64_t b) const;
    std::int64_t neg(std::int64_t a) const;
    std::int64_t sub(std::int64_t a, std::int64_t b) const { return add(a, neg(b)); }

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) { return a.factors == b.factors; }
    friend bool operator!=(const GroupSpec& a, const GroupSpec& b) { return !(a == b); }
};

GroupSpec make_group(std::span<const std::int64_t> invariant_factors,
                     std::int64_t max_order = GroupSpec::kDefaultMaxOrder);
GroupSpec make_group(std::initializer_list<std::int64_t> invariant_factors);

// Phase of character gamma at element x, in [0,1). Exact: the returned value
// is an integer multiple of 1/|G|.
double char_phase(const GroupSpec& g, std::int64_t gamma, std::int64_t x);

// Numerator of char_phase over denominator |G|.
std::int64_t char_phase_num(const GroupSpec& g, std::int64_t gamma, std::int64_t x);

// Deterministic primality test by trial division (desk scale).
bool is_prime(std::int64_t n);

/**
 * The multiplicative group of F_p, exposed through its smallest primitive
 * root g: dlog maps [1,p) bijectively onto [0,p-1) with g^dlog(x) = x, and
 * pow is the inverse table. Through dlog, F_p^x is the cyclic group [p-1]
 * and every additive-side algorithm applies to products as well.
 */
struct MulStructure {
    std::int64_t p = 0;
    std::int64_t primitive_root = 0;
    std::vector<std::int32_t> dlog; // size p, dlog[0] = -1
    std::vector<std::int32_t> pow;  // size p-1, pow[k] = g^k mod p

    std::int64_t dlog_of(std::int64_t x) const { return dlog[x]; }
    std::int64_t pow_of(std::int64_t k) const { return pow[k]; }
};

MulStructure find_primitive_root(std::int64_t p,
                                 std::int64_t max_p = GroupSpec::kDefaultMaxOrder);

} // namespace sumprod
