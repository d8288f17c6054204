#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumprod/extremal.hpp"
#include "sumprod/regularity.hpp"
#include "sumprod/search.hpp"

namespace sumprod {

// Set literal, one per line:
//   p=<prime>;elems=<comma-separated residues>
//   p=<prime>;hexbits=<hex of the bit-vector, little-endian bytes>
// Writers use the elems form up to 64 elements and hexbits beyond.
GSet parse_set_line(std::string_view line);
std::string format_set_line(const GSet& set);
std::vector<GSet> parse_set_file(const std::string& path);

enum class OutputFormat { json_lines, csv };
OutputFormat parse_format(std::string_view name);

// f(alpha) table rows: alpha, value, ell, branch, sqrt(2 alpha) asymptote.
struct FalphaRow {
    ThresholdProfile profile;
    double asymptote = 0;
};
std::string falpha_header_csv();
std::string format_falpha_row(const FalphaRow& row, OutputFormat fmt);

std::string serialize_record(const SearchRecord& rec, OutputFormat fmt);
SearchRecord parse_record_json(std::string_view line, const MulStructure& mul);

std::string serialize_decomposition(const DecompositionReport& rep, const GroupSpec& g,
                                    double delta, OutputFormat fmt);

struct ParsedDecomposition {
    GroupSpec group;
    double delta = 0;
    DecompositionReport report;
};

// Structural re-validation on load: dense cell ids, strictly increasing energy
// trace of the right length, final U2 within delta.
ParsedDecomposition parse_decomposition_json(std::string_view line);

// Append-only result cache keyed by a canonical parameter string. Hits are
// re-validated against the witness before reuse.
class ResultCache {
public:
    explicit ResultCache(std::string path) : path_(std::move(path)) {}

    std::optional<std::string> lookup(const std::string& key) const;
    void append(const std::string& key, const std::string& record_json) const;

    static std::string search_key(std::int64_t p, std::int64_t min_card, SearchMode mode);

private:
    std::string path_;
};

} // namespace sumprod
