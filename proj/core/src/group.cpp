#include "sumprod/group.hpp"

#include <stdexcept>
#include <string>

namespace sumprod {

GroupSpec make_group(std::span<const std::int64_t> invariant_factors, std::int64_t max_order) {
    if (invariant_factors.empty())
        throw std::invalid_argument("make_group: at least one invariant factor required");
    GroupSpec g;
    g.factors.assign(invariant_factors.begin(), invariant_factors.end());
    g.strides.resize(g.factors.size());
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (g.factors[i] < 2)
            throw std::invalid_argument("make_group: invariant factor " + std::to_string(g.factors[i]) + " < 2");
        g.strides[i] = g.order;
        if (g.order > max_order / g.factors[i])
            throw std::invalid_argument("make_group: order exceeds configured maximum " + std::to_string(max_order));
        g.order *= g.factors[i];
    }
    g.prime_cyclic = g.factors.size() == 1 && is_prime(g.order);
    return g;
}

GroupSpec make_group(std::initializer_list<std::int64_t> invariant_factors) {
    return make_group(std::span<const std::int64_t>(invariant_factors.begin(), invariant_factors.size()));
}

std::vector<std::int64_t> GroupSpec::coords_of(std::int64_t index) const {
    if (index < 0 || index >= order) throw std::out_of_range("GroupSpec::coords_of: index out of range");
    std::vector<std::int64_t> c(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        c[i] = index % factors[i];
        index /= factors[i];
    }
    return c;
}

std::int64_t GroupSpec::index_of(std::span<const std::int64_t> coords) const {
    if (coords.size() != factors.size())
        throw std::invalid_argument("GroupSpec::index_of: coordinate count mismatch");
    std::int64_t idx = 0;
    for (std::size_t i = factors.size(); i-- > 0;) {
        if (coords[i] < 0 || coords[i] >= factors[i])
            throw std::out_of_range("GroupSpec::index_of: coordinate out of range");
        idx = idx * factors[i] + coords[i];
    }
    return idx;
}

std::int64_t GroupSpec::add(std::int64_t a, std::int64_t b) const {
    if (cyclic()) {
        std::int64_t s = a + b;
        return s >= order ? s - order : s;
    }
    std::int64_t out = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::int64_t n = factors[i];
        std::int64_t s = a % n + b % n;
        if (s >= n) s -= n;
        out += s * strides[i];
        a /= n;
        b /= n;
    }
    return out;
}

std::int64_t GroupSpec::neg(std::int64_t a) const {
    if (cyclic()) return a == 0 ? 0 : order - a;
    std::int64_t out = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::int64_t n = factors[i];
        std::int64_t x = a % n;
        out += (x == 0 ? 0 : n - x) * strides[i];
        a /= n;
    }
    return out;
}

std::int64_t char_phase_num(const GroupSpec& g, std::int64_t gamma, std::int64_t x) {
    if (gamma < 0 || gamma >= g.order || x < 0 || x >= g.order)
        throw std::out_of_range("char_phase: index out of range");
    // sum_i ri*xi/ni = (sum_i ri*xi*(|G|/ni)) / |G|, all integer arithmetic.
    std::int64_t num = 0;
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        std::int64_t n = g.factors[i];
        std::int64_t r = gamma % n;
        std::int64_t xi = x % n;
        num = (num + (r * xi % n) * (g.order / n)) % g.order;
        gamma /= n;
        x /= n;
    }
    return num;
}

double char_phase(const GroupSpec& g, std::int64_t gamma, std::int64_t x) {
    return static_cast<double>(char_phase_num(g, gamma, x)) / static_cast<double>(g.order);
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

MulStructure find_primitive_root(std::int64_t p, std::int64_t max_p) {
    if (p > max_p)
        throw std::invalid_argument("find_primitive_root: p exceeds configured maximum");
    if (p < 3 || !is_prime(p))
        throw std::invalid_argument("find_primitive_root: " + std::to_string(p) + " is not an odd prime");

    std::vector<std::int64_t> prime_factors;
    std::int64_t m = p - 1;
    for (std::int64_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) prime_factors.push_back(m);

    auto pow_mod = [p](std::int64_t b, std::int64_t e) {
        std::int64_t r = 1;
        b %= p;
        while (e > 0) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };

    std::int64_t root = 0;
    for (std::int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (std::int64_t q : prime_factors)
            if (pow_mod(g, (p - 1) / q) == 1) { ok = false; break; }
        if (ok) { root = g; break; }
    }

    MulStructure ms;
    ms.p = p;
    ms.primitive_root = root;
    ms.dlog.assign(static_cast<std::size_t>(p), -1);
    ms.pow.resize(static_cast<std::size_t>(p - 1));
    std::int64_t v = 1;
    for (std::int64_t k = 0; k < p - 1; ++k) {
        ms.pow[k] = static_cast<std::int32_t>(v);
        ms.dlog[v] = static_cast<std::int32_t>(k);
        v = v * root % p;
    }
    return ms;
}

} // namespace sumprod
