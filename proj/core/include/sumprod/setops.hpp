#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumprod/group.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/spectral.hpp"

namespace sumprod {

/**
 * A subset of a group as a bit-vector: bit i of words()[i/64] is element i.
 * Values are effectively immutable once built; all operations return new
 * sets and are safe to run concurrently.
 */
class GSet {
public:
    GSet() = default;
    explicit GSet(const GroupSpec& g)
        : group_(g), words_((static_cast<std::size_t>(g.order) + 63) / 64, 0) {}

    static GSet empty(const GroupSpec& g) { return GSet(g); }
    static GSet full(const GroupSpec& g);
    static GSet of(const GroupSpec& g, std::span<const std::int64_t> elements);
    static GSet of(const GroupSpec& g, std::initializer_list<std::int64_t> elements);
    static GSet from_words(const GroupSpec& g, std::vector<std::uint64_t> words);

    const GroupSpec& group() const { return group_; }
    std::int64_t order() const { return group_.order; }
    std::int64_t card() const { return card_; }
    bool empty_set() const { return card_ == 0; }

    bool contains(std::int64_t x) const {
        return (words_[static_cast<std::size_t>(x) >> 6] >> (x & 63)) & 1;
    }
    void insert(std::int64_t x);
    void erase(std::int64_t x);

    std::vector<std::int64_t> elements() const;
    std::span<const std::uint64_t> words() const { return words_; }

    GSet operator&(const GSet& o) const;
    GSet operator|(const GSet& o) const;
    GSet difference(const GSet& o) const; // this \ o
    GSet complement() const;

    friend bool operator==(const GSet& a, const GSet& b) {
        return a.group_ == b.group_ && a.words_ == b.words_;
    }
    friend bool operator!=(const GSet& a, const GSet& b) { return !(a == b); }

    // Total order used for deterministic tie-breaking: numeric value of the
    // bit-vector with element 0 as the least significant bit.
    bool value_less(const GSet& o) const;

private:
    void recount();
    void mask_tail();

    GroupSpec group_;
    std::vector<std::uint64_t> words_;
    std::int64_t card_ = 0;
};

// {x + a : x in A}. Word-blocked rotate for cyclic groups, per-axis rotation
// otherwise.
GSet translate(const GSet& a, std::int64_t by);
GSet negate_set(const GSet& a);

// {a + b : a in A, b in B}; blocked shift-OR over the smaller operand.
// On prime-order cyclic groups the Cauchy-Davenport bound
// |A+B| >= min(p, |A|+|B|-1) is asserted on every call.
GSet sumset(const GSet& a, const GSet& b);

// {a*b} over F_p, computed as a sumset in dlog coordinates on [p-1];
// 0 is carried separately.
GSet product_set(const GSet& a, const GSet& b, const MulStructure& mul);

// |A /\ (x - A)| = #{(a,b) in A^2 : a+b = x}.
std::int64_t rep_count(const GSet& a, std::int64_t x);

// S_eps(A) = {x : rep_count(A,x) >= eps|G|}, threshold compared exactly.
GSet popular_sums(const GSet& a, const Rational& eps);

// {c*a mod p}, c != 0, group of prime order.
GSet dilate(const GSet& a, std::int64_t c);

// H = {h : S + h = S}; always a subgroup of G.
GSet kneser_stabilizer(const GSet& s);

struct KneserReport {
    std::int64_t lhs = 0;        // |A+A|
    std::int64_t rhs = 0;        // 2|A+H| - |H|
    std::int64_t a_plus_h = 0;
    GSet stabilizer;
    bool holds = false;
};

// Kneser's inequality |A+A| >= 2|A+H| - |H| for the computed stabilizer.
KneserReport kneser_check(const GSet& a);

// |A| > |G|/(ell+1)  =>  |A+A| >= |G|/ell  (vacuously true otherwise).
bool lemma_kneser_bound(const GSet& a, std::int64_t ell);

// H = {x in F_p^x : dlog(x) = 0 mod ell}, as a subset of the additive group [p].
GSet mul_subgroup(const MulStructure& mul, std::int64_t ell);

GridFunction to_indicator(const GSet& a);

} // namespace sumprod
