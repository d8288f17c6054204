#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sumprod {

// Exact rational arithmetic on int64 with __int128 intermediates.
// Thresholds and branch points in this project sit exactly on rational
// boundaries, so everything that classifies against them stays exact.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "a/b", integers, and plain decimals ("0.25" -> 1/4).
    static Rational parse(std::string_view s);

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make_checked(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make_checked(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

private:
    using i128 = __int128;

    static Rational make_checked(i128 n, i128 d) {
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: 64-bit overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        *this = make_checked(num_, den_);
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rational Rational::parse(std::string_view s) {
    auto bad = [&] { return std::invalid_argument("Rational::parse: malformed number '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') { neg = s[0] == '-'; i = 1; }
    auto slash = s.find('/');
    if (slash != std::string_view::npos) {
        std::int64_t n = 0, d = 0;
        if (slash <= i || slash + 1 >= s.size()) throw bad();
        for (std::size_t k = i; k < slash; ++k) {
            if (s[k] < '0' || s[k] > '9') throw bad();
            n = n * 10 + (s[k] - '0');
        }
        for (std::size_t k = slash + 1; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9') throw bad();
            d = d * 10 + (s[k] - '0');
        }
        return Rational(neg ? -n : n, d);
    }
    auto dot = s.find('.');
    std::int64_t n = 0, d = 1;
    bool any = false;
    for (std::size_t k = i; k < s.size(); ++k) {
        if (k == dot) continue;
        if (s[k] < '0' || s[k] > '9') throw bad();
        if (n > (INT64_MAX - 9) / 10) throw std::overflow_error("Rational::parse: too many digits");
        n = n * 10 + (s[k] - '0');
        any = true;
        if (dot != std::string_view::npos && k > dot) {
            if (d > INT64_MAX / 10) throw std::overflow_error("Rational::parse: too many digits");
            d *= 10;
        }
    }
    if (!any) throw bad();
    return Rational(neg ? -n : n, d);
}

} // namespace sumprod
