#pragma once

#include <cstdint>
#include <vector>

#include "sumprod/extremal.hpp"
#include "sumprod/rational.hpp"
#include "sumprod/setops.hpp"

namespace sumprod {

enum class SearchMode { exhaustive, structured };

const char* mode_name(SearchMode m);

struct SearchRecord {
    std::int64_t p = 0;
    std::int64_t min_card = 0;
    GSet witness;
    std::int64_t sum_size = 0;
    std::int64_t prod_size = 0;
    Rational ratio;            // max(sum_size, prod_size) / p
    SearchMode mode = SearchMode::exhaustive;
    Rational f_alpha_line;     // f(min_card / p)
    double garaev_line = 0;    // sqrt(p * min_card) / p, implied constant 1
    double conjecture_line = 0;// sqrt(2 p min_card) / p, o(1) = 0, advisory

    friend bool operator==(const SearchRecord& a, const SearchRecord& b) {
        return a.p == b.p && a.min_card == b.min_card && a.witness == b.witness &&
               a.sum_size == b.sum_size && a.prod_size == b.prod_size && a.ratio == b.ratio &&
               a.mode == b.mode;
    }
};

struct SearchConfig {
    int workers = 1;
    std::int64_t exhaustive_limit = 29;
    bool orbit_reduction = true;
};

// Exact minimum of max(|A+A|, |A.A|) over all A with |A| >= min_card,
// enumerated over dilation-orbit representatives (the orbit member with the
// smallest bitmask value). Bit-identical results for any worker count.
SearchRecord exhaustive_search(const MulStructure& mul, std::int64_t min_card,
                               const SearchConfig& cfg = {});

// Best ratio over the family d*([1,N] /\ cH) meeting the cardinality floor;
// an upper bound on the exhaustive minimum, witness canonicalized over
// dilations.
SearchRecord structured_search(const MulStructure& mul, std::int64_t min_card,
                               const SearchConfig& cfg = {});

// Recompute the witness-derived fields and check them; throws on mismatch.
void validate_record(const SearchRecord& rec, const MulStructure& mul);

struct MarginRow {
    std::int64_t ell = 0;
    Rational beta;          // ratio + eps
    Rational alpha_witness; // |A| / p
    Rational bound;         // beta / (2(ell+1))
    Rational margin;        // bound - alpha_witness
    bool holds = false;
};

// Advisory margins against the dense sum-product threshold: one row per ell
// with ratio + eps < 1/ell. Small-p violations are expected and recorded,
// never treated as errors.
std::vector<MarginRow> theorem_main_margin(const SearchRecord& rec, const Rational& eps);

} // namespace sumprod
