#include "sumprod/setops.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace sumprod {

namespace {

void check_same_group(const GSet& a, const GSet& b, const char* who) {
    if (a.group() != b.group()) throw std::invalid_argument(std::string(who) + ": group mismatch");
}

// Big shifts over a word array; bits leaving the window are dropped.
void shl_into(std::span<const std::uint64_t> src, std::int64_t k, std::vector<std::uint64_t>& dst) {
    const std::size_t nw = src.size();
    const std::size_t ws = static_cast<std::size_t>(k >> 6);
    const int bs = static_cast<int>(k & 63);
    for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t v = src[w];
        if (!v) continue;
        if (w + ws < nw) dst[w + ws] |= bs ? (v << bs) : v;
        if (bs && w + ws + 1 < nw) dst[w + ws + 1] |= v >> (64 - bs);
    }
}

void shr_into(std::span<const std::uint64_t> src, std::int64_t k, std::vector<std::uint64_t>& dst) {
    const std::size_t nw = src.size();
    const std::size_t ws = static_cast<std::size_t>(k >> 6);
    const int bs = static_cast<int>(k & 63);
    for (std::size_t w = ws; w < nw; ++w) {
        std::uint64_t v = src[w];
        if (!v) continue;
        dst[w - ws] |= bs ? (v >> bs) : v;
        if (bs && w - ws >= 1) dst[w - ws - 1] |= v << (64 - bs);
    }
}

// dst = src rotated left by s positions within an n-bit window.
std::vector<std::uint64_t> rotate_bits(std::span<const std::uint64_t> src, std::int64_t n, std::int64_t s) {
    const std::size_t nw = src.size();
    std::vector<std::uint64_t> dst(nw, 0);
    if (n <= 64) {
        std::uint64_t mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
        std::uint64_t w = src[0];
        dst[0] = s == 0 ? w : (((w << s) | (w >> (n - s))) & mask);
        return dst;
    }
    if (s == 0) {
        dst.assign(src.begin(), src.end());
        return dst;
    }
    shl_into(src, s, dst);       // x -> x + s for x < n - s
    shr_into(src, n - s, dst);   // x -> x + s - n for x >= n - s
    std::int64_t tail = n & 63;
    if (tail) dst[nw - 1] &= (1ull << tail) - 1;
    return dst;
}

} // namespace

GSet GSet::full(const GroupSpec& g) {
    GSet s(g);
    s.words_.assign(s.words_.size(), ~0ull);
    s.mask_tail();
    s.card_ = g.order;
    return s;
}

GSet GSet::of(const GroupSpec& g, std::span<const std::int64_t> elements) {
    GSet s(g);
    for (std::int64_t x : elements) s.insert(x);
    return s;
}

GSet GSet::of(const GroupSpec& g, std::initializer_list<std::int64_t> elements) {
    return of(g, std::span<const std::int64_t>(elements.begin(), elements.size()));
}

GSet GSet::from_words(const GroupSpec& g, std::vector<std::uint64_t> words) {
    GSet s(g);
    if (words.size() != s.words_.size())
        throw std::invalid_argument("GSet::from_words: word count mismatch");
    s.words_ = std::move(words);
    s.mask_tail();
    s.recount();
    return s;
}

void GSet::insert(std::int64_t x) {
    if (x < 0 || x >= group_.order) throw std::out_of_range("GSet::insert: element out of range");
    std::uint64_t& w = words_[static_cast<std::size_t>(x) >> 6];
    std::uint64_t bit = 1ull << (x & 63);
    if (!(w & bit)) { w |= bit; ++card_; }
}

void GSet::erase(std::int64_t x) {
    if (x < 0 || x >= group_.order) throw std::out_of_range("GSet::erase: element out of range");
    std::uint64_t& w = words_[static_cast<std::size_t>(x) >> 6];
    std::uint64_t bit = 1ull << (x & 63);
    if (w & bit) { w &= ~bit; --card_; }
}

std::vector<std::int64_t> GSet::elements() const {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(card_));
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t v = words_[w];
        while (v) {
            out.push_back(static_cast<std::int64_t>(w * 64 + std::countr_zero(v)));
            v &= v - 1;
        }
    }
    return out;
}

GSet GSet::operator&(const GSet& o) const {
    check_same_group(*this, o, "GSet::operator&");
    GSet s(group_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = words_[i] & o.words_[i];
    s.recount();
    return s;
}

GSet GSet::operator|(const GSet& o) const {
    check_same_group(*this, o, "GSet::operator|");
    GSet s(group_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = words_[i] | o.words_[i];
    s.recount();
    return s;
}

GSet GSet::difference(const GSet& o) const {
    check_same_group(*this, o, "GSet::difference");
    GSet s(group_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = words_[i] & ~o.words_[i];
    s.recount();
    return s;
}

GSet GSet::complement() const {
    GSet s(group_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = ~words_[i];
    s.mask_tail();
    s.recount();
    return s;
}

bool GSet::value_less(const GSet& o) const {
    for (std::size_t i = words_.size(); i-- > 0;)
        if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
    return false;
}

void GSet::recount() {
    std::int64_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    card_ = c;
}

void GSet::mask_tail() {
    std::int64_t tail = group_.order & 63;
    if (tail) words_.back() &= (1ull << tail) - 1;
}

GSet translate(const GSet& a, std::int64_t by) {
    const GroupSpec& g = a.group();
    if (by < 0 || by >= g.order) throw std::out_of_range("translate: shift out of range");
    if (g.cyclic())
        return GSet::from_words(g, rotate_bits(a.words(), g.order, by));
    GSet out(g);
    for (std::int64_t x : a.elements()) out.insert(g.add(x, by));
    return out;
}

GSet negate_set(const GSet& a) {
    const GroupSpec& g = a.group();
    GSet out(g);
    for (std::int64_t x : a.elements()) out.insert(g.neg(x));
    return out;
}

GSet sumset(const GSet& a, const GSet& b) {
    check_same_group(a, b, "sumset");
    const GroupSpec& g = a.group();
    const GSet& small = a.card() <= b.card() ? a : b;
    const GSet& large = a.card() <= b.card() ? b : a;
    std::vector<std::uint64_t> acc(a.words().size(), 0);
    if (g.cyclic()) {
        for (std::int64_t s : small.elements()) {
            auto rot = rotate_bits(large.words(), g.order, s);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] |= rot[i];
        }
    } else {
        for (std::int64_t s : small.elements()) {
            GSet t = translate(large, s);
            auto w = t.words();
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] |= w[i];
        }
    }
    GSet out = GSet::from_words(g, std::move(acc));
    if (g.prime_cyclic && a.card() > 0 && b.card() > 0) {
        std::int64_t cd = std::min(g.order, a.card() + b.card() - 1);
        if (out.card() < cd)
            throw std::logic_error("sumset: Cauchy-Davenport bound violated (internal error)");
    }
    return out;
}

GSet product_set(const GSet& a, const GSet& b, const MulStructure& mul) {
    check_same_group(a, b, "product_set");
    const GroupSpec& g = a.group();
    if (!g.prime_cyclic || g.order != mul.p)
        throw std::invalid_argument("product_set: group has no attached multiplicative structure for this p");
    GroupSpec dl = make_group({mul.p - 1});
    GSet da(dl), db(dl);
    for (std::int64_t x : a.elements())
        if (x != 0) da.insert(mul.dlog_of(x));
    for (std::int64_t x : b.elements())
        if (x != 0) db.insert(mul.dlog_of(x));
    GSet out(g);
    if (da.card() > 0 && db.card() > 0) {
        GSet dprod = sumset(da, db);
        for (std::int64_t k : dprod.elements()) out.insert(mul.pow_of(k));
    }
    if ((a.contains(0) && b.card() > 0) || (b.contains(0) && a.card() > 0)) out.insert(0);
    return out;
}

std::int64_t rep_count(const GSet& a, std::int64_t x) {
    if (x < 0 || x >= a.order()) throw std::out_of_range("rep_count: element out of range");
    GSet shifted = translate(negate_set(a), x); // x - A
    std::int64_t c = 0;
    auto wa = a.words();
    auto wb = shifted.words();
    for (std::size_t i = 0; i < wa.size(); ++i) c += std::popcount(wa[i] & wb[i]);
    return c;
}

GSet popular_sums(const GSet& a, const Rational& eps) {
    if (!(eps > Rational(0))) throw std::invalid_argument("popular_sums: eps must be positive");
    const GroupSpec& g = a.group();
    GSet out(g);
    GSet neg = negate_set(a);
    for (std::int64_t x = 0; x < g.order; ++x) {
        GSet shifted = translate(neg, x);
        std::int64_t c = 0;
        auto wa = a.words();
        auto wb = shifted.words();
        for (std::size_t i = 0; i < wa.size(); ++i) c += std::popcount(wa[i] & wb[i]);
        // rep >= eps|G| as exact rationals
        if (static_cast<__int128>(c) * eps.den() >= static_cast<__int128>(eps.num()) * g.order)
            out.insert(x);
    }
    return out;
}

GSet dilate(const GSet& a, std::int64_t c) {
    const GroupSpec& g = a.group();
    if (!g.prime_cyclic) throw std::invalid_argument("dilate: group must have prime order");
    if (c % g.order == 0) throw std::invalid_argument("dilate: c must be nonzero mod p");
    c %= g.order;
    if (c < 0) c += g.order;
    GSet out(g);
    for (std::int64_t x : a.elements()) out.insert(c * x % g.order);
    return out;
}

GSet kneser_stabilizer(const GSet& s) {
    if (s.empty_set()) throw std::invalid_argument("kneser_stabilizer: empty set");
    const GroupSpec& g = s.group();
    GSet h(g);
    for (std::int64_t x = 0; x < g.order; ++x)
        if (translate(s, x) == s) h.insert(x);
    // Stabilizers are closed; anything else is an internal error.
    if (!h.contains(0) || sumset(h, h) != h)
        throw std::logic_error("kneser_stabilizer: computed set is not a subgroup");
    return h;
}

KneserReport kneser_check(const GSet& a) {
    if (a.empty_set()) throw std::invalid_argument("kneser_check: empty set");
    KneserReport r;
    GSet s = sumset(a, a);
    r.stabilizer = kneser_stabilizer(s);
    GSet ah = sumset(a, r.stabilizer);
    r.lhs = s.card();
    r.a_plus_h = ah.card();
    r.rhs = 2 * r.a_plus_h - r.stabilizer.card();
    r.holds = r.lhs >= r.rhs;
    return r;
}

bool lemma_kneser_bound(const GSet& a, std::int64_t ell) {
    if (ell < 1) throw std::invalid_argument("lemma_kneser_bound: ell must be >= 1");
    const std::int64_t n = a.order();
    if (a.card() * (ell + 1) <= n) return true; // hypothesis |A| > |G|/(ell+1) not met
    if (a.empty_set()) return true;
    return sumset(a, a).card() * ell >= n;
}

GSet mul_subgroup(const MulStructure& mul, std::int64_t ell) {
    if (ell < 1 || (mul.p - 1) % ell != 0)
        throw std::invalid_argument("mul_subgroup: ell must divide p-1");
    GSet h(make_group({mul.p}));
    for (std::int64_t k = 0; k < mul.p - 1; k += ell) h.insert(mul.pow_of(k));
    return h;
}

GridFunction to_indicator(const GSet& a) {
    GridFunction f = GridFunction::zero(a.group());
    for (std::int64_t x : a.elements()) f.values[static_cast<std::size_t>(x)] = cplx(1.0, 0.0);
    f.one_bounded = true;
    return f;
}

} // namespace sumprod
