#include "sumprod/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sumprod {

using nlohmann::json;

namespace {

std::int64_t parse_int(std::string_view s, const char* who) {
    std::int64_t v = 0;
    bool any = false;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument(std::string(who) + ": bad integer '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
        any = true;
    }
    if (!any) throw std::invalid_argument(std::string(who) + ": empty integer");
    return v;
}

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("set line: bad hex digit");
}

} // namespace

GSet parse_set_line(std::string_view line) {
    auto semi = line.find(';');
    if (semi == std::string_view::npos || line.substr(0, 2) != "p=")
        throw std::invalid_argument("set line: expected 'p=<prime>;...'");
    std::int64_t p = parse_int(line.substr(2, semi - 2), "set line");
    if (!is_prime(p)) throw std::invalid_argument("set line: p = " + std::to_string(p) + " is not prime");
    GroupSpec g = make_group({p});
    std::string_view rest = line.substr(semi + 1);
    if (rest.substr(0, 6) == "elems=") {
        GSet s(g);
        std::string_view body = rest.substr(6);
        while (!body.empty()) {
            auto comma = body.find(',');
            std::string_view tok = body.substr(0, comma);
            if (!tok.empty()) {
                std::int64_t x = parse_int(tok, "set line");
                if (x >= p) throw std::invalid_argument("set line: residue out of range");
                s.insert(x);
            }
            if (comma == std::string_view::npos) break;
            body.remove_prefix(comma + 1);
        }
        return s;
    }
    if (rest.substr(0, 8) == "hexbits=") {
        std::string_view body = rest.substr(8);
        if (body.size() % 2 != 0) throw std::invalid_argument("set line: hexbits needs whole bytes");
        std::vector<std::uint64_t> words((static_cast<std::size_t>(p) + 63) / 64, 0);
        std::size_t nbytes = body.size() / 2;
        if (nbytes != (static_cast<std::size_t>(p) + 7) / 8)
            throw std::invalid_argument("set line: hexbits length does not match p");
        for (std::size_t b = 0; b < nbytes; ++b) {
            int v = hex_val(body[2 * b]) * 16 + hex_val(body[2 * b + 1]);
            words[b / 8] |= static_cast<std::uint64_t>(v) << (8 * (b % 8));
        }
        return GSet::from_words(g, std::move(words));
    }
    throw std::invalid_argument("set line: expected 'elems=' or 'hexbits='");
}

std::string format_set_line(const GSet& set) {
    std::ostringstream os;
    os << "p=" << set.order() << ";";
    if (set.card() <= 64) {
        os << "elems=";
        bool first = true;
        for (std::int64_t x : set.elements()) {
            if (!first) os << ",";
            os << x;
            first = false;
        }
    } else {
        os << "hexbits=";
        static const char* digits = "0123456789abcdef";
        std::size_t nbytes = (static_cast<std::size_t>(set.order()) + 7) / 8;
        auto words = set.words();
        for (std::size_t b = 0; b < nbytes; ++b) {
            int v = static_cast<int>(words[b / 8] >> (8 * (b % 8)) & 0xff);
            os << digits[v >> 4] << digits[v & 15];
        }
    }
    return os.str();
}

std::vector<GSet> parse_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open set file: " + path);
    std::vector<GSet> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_set_line(line));
    }
    return out;
}

OutputFormat parse_format(std::string_view name) {
    if (name == "json-lines") return OutputFormat::json_lines;
    if (name == "csv") return OutputFormat::csv;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (json-lines or csv)");
}

std::string falpha_header_csv() { return "alpha,value,ell,branch,asymptote"; }

std::string format_falpha_row(const FalphaRow& row, OutputFormat fmt) {
    const ThresholdProfile& p = row.profile;
    if (fmt == OutputFormat::csv) {
        std::ostringstream os;
        os << p.alpha.str() << "," << p.value.str() << "," << p.optimal_ell << ","
           << branch_name(p.branch) << "," << row.asymptote;
        return os.str();
    }
    json j;
    j["alpha"] = p.alpha.str();
    j["value"] = p.value.str();
    j["ell"] = p.optimal_ell;
    j["branch"] = branch_name(p.branch);
    j["asymptote"] = row.asymptote;
    return j.dump();
}

std::string serialize_record(const SearchRecord& rec, OutputFormat fmt) {
    if (fmt == OutputFormat::csv) {
        std::ostringstream os;
        os << rec.p << "," << rec.min_card << "," << mode_name(rec.mode) << "," << rec.sum_size << ","
           << rec.prod_size << "," << rec.ratio.str() << "," << rec.f_alpha_line.str() << ","
           << rec.garaev_line << "," << rec.conjecture_line << ",\"" << format_set_line(rec.witness)
           << "\"";
        return os.str();
    }
    json j;
    j["type"] = "search";
    j["p"] = rec.p;
    j["min_card"] = rec.min_card;
    j["mode"] = mode_name(rec.mode);
    j["sum_size"] = rec.sum_size;
    j["prod_size"] = rec.prod_size;
    j["ratio"] = rec.ratio.str();
    j["ratio_value"] = rec.ratio.to_double();
    j["f_alpha_line"] = rec.f_alpha_line.str();
    j["garaev_line"] = rec.garaev_line;
    j["conjecture_line"] = rec.conjecture_line;
    j["witness"] = format_set_line(rec.witness);
    return j.dump();
}

SearchRecord parse_record_json(std::string_view line, const MulStructure& mul) {
    json j = json::parse(line);
    SearchRecord rec;
    rec.p = j.at("p").get<std::int64_t>();
    rec.min_card = j.at("min_card").get<std::int64_t>();
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "exhaustive") rec.mode = SearchMode::exhaustive;
    else if (mode == "structured") rec.mode = SearchMode::structured;
    else throw std::invalid_argument("search record: unknown mode '" + mode + "'");
    rec.sum_size = j.at("sum_size").get<std::int64_t>();
    rec.prod_size = j.at("prod_size").get<std::int64_t>();
    rec.ratio = Rational::parse(j.at("ratio").get<std::string>());
    rec.f_alpha_line = Rational::parse(j.at("f_alpha_line").get<std::string>());
    rec.garaev_line = j.at("garaev_line").get<double>();
    if (j.contains("conjecture_line")) rec.conjecture_line = j.at("conjecture_line").get<double>();
    rec.witness = parse_set_line(j.at("witness").get<std::string>());
    validate_record(rec, mul); // records self-validate on load
    return rec;
}

std::string serialize_decomposition(const DecompositionReport& rep, const GroupSpec& g,
                                    double delta, OutputFormat fmt) {
    if (fmt == OutputFormat::csv) {
        // summary row: the nested trace only fits the json-lines encoding
        std::ostringstream os;
        os << g.order << "," << delta << "," << rep.iterations << "," << rep.factor.cell_count()
           << "," << rep.final_u2 << "," << rep.energy_trace.back();
        return os.str();
    }
    json j;
    j["type"] = "decomposition";
    j["group"] = g.factors;
    j["delta"] = delta;
    j["iterations"] = rep.iterations;
    j["cells"] = rep.factor.cell_count();
    j["final_u2"] = rep.final_u2;
    j["energy_trace"] = rep.energy_trace;
    json chosen = json::array();
    for (const auto& c : rep.chosen)
        chosen.push_back({{"gamma", c.gamma}, {"t", c.t}, {"len", c.len}, {"correlation", c.correlation}});
    j["chosen"] = chosen;
    std::vector<std::int32_t> cells(rep.factor.cells().begin(), rep.factor.cells().end());
    j["cell_of"] = cells;
    return j.dump();
}

ParsedDecomposition parse_decomposition_json(std::string_view line) {
    json j = json::parse(line);
    if (j.at("type") != "decomposition")
        throw std::invalid_argument("decomposition record: wrong type tag");
    ParsedDecomposition out;
    std::vector<std::int64_t> factors = j.at("group").get<std::vector<std::int64_t>>();
    out.group = make_group(factors);
    out.delta = j.at("delta").get<double>();
    out.report.iterations = j.at("iterations").get<std::int64_t>();
    out.report.final_u2 = j.at("final_u2").get<double>();
    out.report.energy_trace = j.at("energy_trace").get<std::vector<double>>();
    for (const auto& c : j.at("chosen"))
        out.report.chosen.push_back(IncrementChoice{c.at("gamma").get<std::int64_t>(),
                                                    c.at("t").get<double>(),
                                                    c.at("len").get<double>(),
                                                    c.at("correlation").get<double>()});
    out.report.factor =
        Factor::from_cells(out.group, j.at("cell_of").get<std::vector<std::int32_t>>());
    if (out.report.factor.cell_count() != j.at("cells").get<std::int32_t>())
        throw std::invalid_argument("decomposition record: cell count mismatch");
    if (out.report.energy_trace.size() != static_cast<std::size_t>(out.report.iterations) + 1)
        throw std::invalid_argument("decomposition record: trace length mismatch");
    for (std::size_t i = 1; i < out.report.energy_trace.size(); ++i)
        if (!(out.report.energy_trace[i] > out.report.energy_trace[i - 1]))
            throw std::invalid_argument("decomposition record: energy trace not increasing");
    if (out.report.chosen.size() != static_cast<std::size_t>(out.report.iterations))
        throw std::invalid_argument("decomposition record: choice list length mismatch");
    if (out.report.final_u2 > out.delta)
        throw std::invalid_argument("decomposition record: final U2 above delta");
    return out;
}

std::optional<std::string> ResultCache::lookup(const std::string& key) const {
    std::ifstream in(path_);
    if (!in) return std::nullopt;
    std::string line;
    std::optional<std::string> found;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            continue; // damaged line: treat as a miss
        }
        if (j.contains("key") && j.at("key") == key && j.contains("record"))
            found = j.at("record").dump(); // last entry wins
    }
    return found;
}

void ResultCache::append(const std::string& key, const std::string& record_json) const {
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::invalid_argument("cannot open cache file: " + path_);
    json j;
    j["key"] = key;
    j["record"] = json::parse(record_json);
    out << j.dump() << "\n";
}

std::string ResultCache::search_key(std::int64_t p, std::int64_t min_card, SearchMode mode) {
    std::ostringstream os;
    os << "search;mode=" << mode_name(mode) << ";p=" << p << ";min_card=" << min_card;
    return os.str();
}

} // namespace sumprod
