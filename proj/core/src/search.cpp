#include "sumprod/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace sumprod {

const char* mode_name(SearchMode m) {
    return m == SearchMode::exhaustive ? "exhaustive" : "structured";
}

namespace {

// Per-dilation bit permutation tables: mask -> dilated mask, one byte at a time.
struct DilationTables {
    std::int64_t p;
    // tables[c][chunk][byte] for c in [2, p), four 8-bit chunks of a 32-bit mask
    std::vector<std::array<std::array<std::uint32_t, 256>, 4>> tables;

    explicit DilationTables(std::int64_t p_) : p(p_), tables(static_cast<std::size_t>(p - 2)) {
        for (std::int64_t c = 2; c < p; ++c) {
            auto& tbl = tables[static_cast<std::size_t>(c - 2)];
            for (int chunk = 0; chunk < 4; ++chunk) {
                for (int byte = 0; byte < 256; ++byte) {
                    std::uint32_t out = 0;
                    for (int bit = 0; bit < 8; ++bit) {
                        if (!(byte >> bit & 1)) continue;
                        std::int64_t x = chunk * 8 + bit;
                        if (x >= p) continue;
                        out |= std::uint32_t(1) << (c * x % p);
                    }
                    tbl[static_cast<std::size_t>(chunk)][static_cast<std::size_t>(byte)] = out;
                }
            }
        }
    }

    std::uint32_t apply(std::int64_t c, std::uint32_t mask) const {
        const auto& tbl = tables[static_cast<std::size_t>(c - 2)];
        return tbl[0][mask & 255] | tbl[1][mask >> 8 & 255] | tbl[2][mask >> 16 & 255] |
               tbl[3][mask >> 24 & 255];
    }
};

inline std::uint32_t rotl_bits(std::uint32_t m, int s, int n) {
    if (s == 0) return m;
    const std::uint32_t mask = (n == 32) ? ~0u : ((std::uint32_t(1) << n) - 1);
    return ((m << s) | (m >> (n - s))) & mask;
}

struct MaskBest {
    std::int64_t value = -1; // max(|A+A|, |A.A|); -1 = none
    std::uint32_t witness = 0;

    void offer(std::int64_t v, std::uint32_t w) {
        if (value < 0 || v < value || (v == value && w < witness)) {
            value = v;
            witness = w;
        }
    }
    void merge(const MaskBest& o) {
        if (o.value >= 0) offer(o.value, o.witness);
    }
};

struct MaskKernel {
    std::int64_t p;
    std::vector<std::uint32_t> dlog_bit; // a -> bit at dlog(a), a in [1,p)

    explicit MaskKernel(const MulStructure& mul) : p(mul.p), dlog_bit(static_cast<std::size_t>(mul.p), 0) {
        for (std::int64_t a = 1; a < p; ++a)
            dlog_bit[static_cast<std::size_t>(a)] = std::uint32_t(1) << mul.dlog_of(a);
    }

    std::int64_t sum_size(std::uint32_t m) const {
        std::uint32_t acc = 0;
        std::uint32_t it = m;
        while (it) {
            int a = std::countr_zero(it);
            it &= it - 1;
            acc |= rotl_bits(m, a, static_cast<int>(p));
        }
        return std::popcount(acc);
    }

    std::int64_t prod_size(std::uint32_t m) const {
        std::uint32_t dm = 0;
        std::uint32_t it = m & ~std::uint32_t(1); // drop 0
        while (it) {
            int a = std::countr_zero(it);
            it &= it - 1;
            dm |= dlog_bit[static_cast<std::size_t>(a)];
        }
        std::uint32_t acc = 0;
        it = dm;
        while (it) {
            int k = std::countr_zero(it);
            it &= it - 1;
            acc |= rotl_bits(dm, k, static_cast<int>(p - 1));
        }
        std::int64_t size = std::popcount(acc);
        if (m & 1) ++size; // 0 in A and A nonempty => 0 in A.A
        return size;
    }
};

GSet mask_to_set(const GroupSpec& g, std::uint32_t mask) {
    GSet s(g);
    while (mask) {
        int a = std::countr_zero(mask);
        mask &= mask - 1;
        s.insert(a);
    }
    return s;
}

SearchRecord finish_record(const MulStructure& mul, std::int64_t min_card, SearchMode mode,
                           const GSet& witness) {
    SearchRecord rec;
    rec.p = mul.p;
    rec.min_card = min_card;
    rec.witness = witness;
    rec.sum_size = sumset(witness, witness).card();
    rec.prod_size = product_set(witness, witness, mul).card();
    rec.ratio = Rational(std::max(rec.sum_size, rec.prod_size), mul.p);
    rec.mode = mode;
    Rational alpha(min_card, mul.p);
    rec.f_alpha_line = alpha < Rational(1) ? f_alpha(alpha).value : Rational(1);
    rec.garaev_line = std::sqrt(static_cast<double>(mul.p) * static_cast<double>(min_card)) /
                      static_cast<double>(mul.p);
    rec.conjecture_line = std::sqrt(2.0 * static_cast<double>(mul.p) * static_cast<double>(min_card)) /
                          static_cast<double>(mul.p);
    return rec;
}

} // namespace

SearchRecord exhaustive_search(const MulStructure& mul, std::int64_t min_card, const SearchConfig& cfg) {
    const std::int64_t p = mul.p;
    if (p > cfg.exhaustive_limit)
        throw std::invalid_argument("exhaustive_search: p exceeds the configured limit " +
                                    std::to_string(cfg.exhaustive_limit));
    if (p > 31) throw std::invalid_argument("exhaustive_search: p > 31 not supported by the mask kernel");
    if (min_card < 1 || min_card > p)
        throw std::invalid_argument("exhaustive_search: min_card must lie in [1, p]");

    const DilationTables dil(p);
    const MaskKernel kernel(mul);
    const std::uint64_t total = std::uint64_t(1) << p;

    // Fixed chunk grid, independent of the worker count, so the merge below is
    // bit-identical for any parallelism.
    const std::uint64_t chunk_size = std::max<std::uint64_t>(std::uint64_t(1) << 16, total >> 10);
    const std::size_t num_chunks = static_cast<std::size_t>((total + chunk_size - 1) / chunk_size);
    std::vector<MaskBest> chunk_best(num_chunks);

    auto run_chunk = [&](std::size_t ci) {
        const std::uint64_t lo = ci * chunk_size;
        const std::uint64_t hi = std::min(total, lo + chunk_size);
        MaskBest best;
        for (std::uint64_t mm = lo; mm < hi; ++mm) {
            const std::uint32_t m = static_cast<std::uint32_t>(mm);
            if (std::popcount(m) < min_card) continue;
            if (cfg.orbit_reduction) {
                bool canonical = true;
                for (std::int64_t c = 2; c < p; ++c) {
                    if (dil.apply(c, m) < m) { canonical = false; break; }
                }
                if (!canonical) continue;
            }
            std::int64_t v = std::max(kernel.sum_size(m), kernel.prod_size(m));
            best.offer(v, m);
        }
        chunk_best[ci] = best;
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t ci = 0; ci < num_chunks; ++ci) run_chunk(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t ci = next.fetch_add(1); ci < num_chunks; ci = next.fetch_add(1))
                    run_chunk(ci);
            });
        }
        for (auto& t : pool) t.join();
    }

    MaskBest best;
    for (const MaskBest& b : chunk_best) best.merge(b);
    if (best.value < 0) throw std::logic_error("exhaustive_search: empty candidate space");

    GroupSpec g = make_group({p});
    SearchRecord rec = finish_record(mul, min_card, SearchMode::exhaustive, mask_to_set(g, best.witness));
    if (std::max(rec.sum_size, rec.prod_size) != best.value)
        throw std::logic_error("exhaustive_search: kernel and library sizes disagree (internal error)");
    return rec;
}

namespace {

// Least bitmask value over the dilation orbit {cA : c != 0}.
GSet canonical_dilate(const GSet& a) {
    const GroupSpec& g = a.group();
    const std::int64_t p = g.order;
    const auto elems = a.elements();
    std::vector<std::uint64_t> best(a.words().begin(), a.words().end());
    std::vector<std::uint64_t> scratch(best.size());
    for (std::int64_t c = 2; c < p; ++c) {
        std::fill(scratch.begin(), scratch.end(), 0);
        for (std::int64_t x : elems) {
            std::int64_t y = c * x % p;
            scratch[static_cast<std::size_t>(y) >> 6] |= std::uint64_t(1) << (y & 63);
        }
        for (std::size_t i = scratch.size(); i-- > 0;) {
            if (scratch[i] != best[i]) {
                if (scratch[i] < best[i]) best = scratch;
                break;
            }
        }
    }
    return GSet::from_words(g, std::move(best));
}

} // namespace

SearchRecord structured_search(const MulStructure& mul, std::int64_t min_card, const SearchConfig&) {
    const std::int64_t p = mul.p;
    if (min_card < 1 || min_card > p)
        throw std::invalid_argument("structured_search: min_card must lie in [1, p]");
    GroupSpec g = make_group({p});
    GroupSpec dl = make_group({p - 1});

    // Candidates are scanned in deterministic (ell, coset, N) order; ties keep
    // the earliest candidate. The reported witness is the winner's
    // dilation-orbit canonical form, which also covers the dilated family
    // members d*([1,N] /\ cH) without scanning d.
    std::int64_t best_val = -1;
    GSet best_raw;

    for (std::int64_t ell = 1; ell < p; ++ell) {
        if ((p - 1) % ell != 0) continue;
        for (std::int64_t coset = 0; coset < ell; ++coset) {
            // members of g^coset H in increasing residue order
            std::vector<std::int64_t> members;
            members.reserve(static_cast<std::size_t>((p - 1) / ell));
            for (std::int64_t k = coset; k < p - 1; k += ell) members.push_back(mul.pow_of(k));
            std::sort(members.begin(), members.end());

            GSet a(g), da(dl);
            GSet sums(g), prods(dl);
            for (std::int64_t x : members) {
                // grow A = [1, x] /\ cH by one element; update A+A and the
                // dlog-side product set incrementally
                a.insert(x);
                sums = sums | translate(a, x);
                std::int64_t dx = mul.dlog_of(x);
                da.insert(dx);
                prods = prods | translate(da, dx);
                std::int64_t val = std::max(sums.card(), prods.card());
                // the objective only grows along a run
                if (best_val >= 0 && val > best_val) break;
                if (a.card() < min_card) continue;
                if (best_val < 0 || val < best_val) {
                    best_val = val;
                    best_raw = a;
                }
            }
        }
    }
    if (best_val < 0)
        throw std::invalid_argument("structured_search: no family member meets the cardinality floor");
    return finish_record(mul, min_card, SearchMode::structured, canonical_dilate(best_raw));
}

void validate_record(const SearchRecord& rec, const MulStructure& mul) {
    if (rec.p != mul.p) throw std::invalid_argument("validate_record: p mismatch");
    if (rec.witness.card() < rec.min_card)
        throw std::invalid_argument("validate_record: witness smaller than the cardinality floor");
    std::int64_t s = sumset(rec.witness, rec.witness).card();
    std::int64_t q = product_set(rec.witness, rec.witness, mul).card();
    if (s != rec.sum_size || q != rec.prod_size)
        throw std::invalid_argument("validate_record: stored sizes do not match the witness");
    if (rec.ratio != Rational(std::max(s, q), rec.p))
        throw std::invalid_argument("validate_record: stored ratio does not match the witness");
}

std::vector<MarginRow> theorem_main_margin(const SearchRecord& rec, const Rational& eps) {
    if (!(eps > Rational(0))) throw std::invalid_argument("theorem_main_margin: eps must be positive");
    std::vector<MarginRow> rows;
    Rational beta = rec.ratio + eps;
    Rational alpha(rec.witness.card(), rec.p);
    for (std::int64_t ell = 1;; ++ell) {
        if (!(beta < Rational(1, ell))) break;
        MarginRow row;
        row.ell = ell;
        row.beta = beta;
        row.alpha_witness = alpha;
        row.bound = beta / Rational(2 * (ell + 1));
        row.margin = row.bound - alpha;
        row.holds = alpha <= row.bound;
        rows.push_back(row);
    }
    return rows;
}

} // namespace sumprod
