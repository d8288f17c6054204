// Command-line surface for the sum-product toolkit.
//
// Subcommands: falpha, search, construct, regularity, verify.
// Exit codes: 0 success, 1 usage, 2 validation failure, 3 invariant-suite failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "sumprod/extremal.hpp"
#include "sumprod/io.hpp"
#include "sumprod/regularity.hpp"
#include "sumprod/search.hpp"
#include "sumprod/verify.hpp"

namespace sp = sumprod;

namespace {

struct Options {
    std::int64_t p = 0;
    std::string alpha;
    double delta = 0;
    std::string eps;
    std::int64_t ell = 0;
    std::int64_t n = 0;
    std::string mode = "exhaustive";
    int workers = 1;
    std::string format = "json-lines";
    std::string out;
    std::string cache;
    std::string set_file;
    std::string suite;
    std::int64_t exhaustive_limit = 29;
    double c0 = 1.0 / 64;
    double c1 = 1.0 / 8;
    double arc_c = 0.0795774715459476678;
};

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<sp::Rational> parse_alpha_list(const std::string& spec) {
    std::vector<sp::Rational> out;
    if (spec.empty()) return out;
    auto range_pos = spec.find("..");
    if (range_pos != std::string::npos) {
        auto colon = spec.find(':', range_pos + 2);
        if (colon == std::string::npos)
            throw std::invalid_argument("alpha range must look like lo..hi:step");
        sp::Rational lo = sp::Rational::parse(spec.substr(0, range_pos));
        sp::Rational hi = sp::Rational::parse(spec.substr(range_pos + 2, colon - range_pos - 2));
        sp::Rational step = sp::Rational::parse(spec.substr(colon + 1));
        if (!(step > sp::Rational(0)) || hi < lo)
            throw std::invalid_argument("alpha range must be nonempty with positive step");
        for (sp::Rational a = lo; a <= hi; a += step) out.push_back(a);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(sp::Rational::parse(tok));
    return out;
}

int cmd_falpha(const Options& opt) {
    auto alphas = parse_alpha_list(opt.alpha);
    sp::OutputFormat fmt = sp::parse_format(opt.format);
    OutputSink sink(opt.out);
    if (fmt == sp::OutputFormat::csv) sink.stream() << sp::falpha_header_csv() << "\n";
    for (const auto& a : alphas) {
        sp::FalphaRow row;
        row.profile = sp::f_alpha(a);
        row.asymptote = std::sqrt(2.0 * a.to_double());
        sink.stream() << sp::format_falpha_row(row, fmt) << "\n";
    }
    return 0;
}

int cmd_search(const Options& opt) {
    if (opt.p <= 0) throw std::invalid_argument("search: --p is required");
    sp::MulStructure mul = sp::find_primitive_root(opt.p);
    sp::Rational alpha = sp::Rational::parse(opt.alpha.empty() ? "0" : opt.alpha);
    if (!(alpha > sp::Rational(0)) || alpha > sp::Rational(1))
        throw std::invalid_argument("search: --alpha must lie in (0, 1]");
    // min_card = ceil(alpha * p)
    std::int64_t min_card = (alpha.num() * opt.p + alpha.den() - 1) / alpha.den();

    sp::SearchMode mode;
    if (opt.mode == "exhaustive") mode = sp::SearchMode::exhaustive;
    else if (opt.mode == "structured") mode = sp::SearchMode::structured;
    else throw std::invalid_argument("search: --mode must be exhaustive or structured");

    sp::SearchConfig cfg;
    cfg.workers = opt.workers;
    cfg.exhaustive_limit = opt.exhaustive_limit;

    sp::OutputFormat fmt = sp::parse_format(opt.format);
    OutputSink sink(opt.out);

    std::string cache_key = sp::ResultCache::search_key(opt.p, min_card, mode);
    if (!opt.cache.empty()) {
        sp::ResultCache cache(opt.cache);
        if (auto hit = cache.lookup(cache_key)) {
            try {
                sp::SearchRecord rec = sp::parse_record_json(*hit, mul); // re-verifies
                sink.stream() << sp::serialize_record(rec, fmt) << "\n";
                std::cerr << "cache hit: " << cache_key << "\n";
                return 0;
            } catch (const std::exception& e) {
                std::cerr << "cache entry rejected (" << e.what() << "); recomputing\n";
            }
        }
    }

    sp::SearchRecord rec = mode == sp::SearchMode::exhaustive
                               ? sp::exhaustive_search(mul, min_card, cfg)
                               : sp::structured_search(mul, min_card, cfg);
    sink.stream() << sp::serialize_record(rec, fmt) << "\n";
    std::cerr << "f(alpha) line: " << rec.f_alpha_line.str()
              << "  garaev line ((p|A|)^1/2 / p, constant 1): " << rec.garaev_line
              << "  conjecture line ((2p|A|)^1/2 / p, advisory): " << rec.conjecture_line << "\n";
    if (!opt.cache.empty()) {
        sp::ResultCache cache(opt.cache);
        cache.append(cache_key, sp::serialize_record(rec, sp::OutputFormat::json_lines));
    }
    return 0;
}

int cmd_construct(const Options& opt) {
    if (opt.p <= 0 || opt.ell <= 0) throw std::invalid_argument("construct: --p and --ell are required");
    sp::MulStructure mul = sp::find_primitive_root(opt.p);
    std::int64_t n_cut = opt.n;
    if (n_cut == 0) {
        if (opt.alpha.empty())
            throw std::invalid_argument("construct: provide --n or --alpha");
        sp::Rational alpha = sp::Rational::parse(opt.alpha);
        if (!(alpha > sp::Rational(0)) || !(alpha < sp::Rational(1)))
            throw std::invalid_argument("construct: --alpha must lie in (0,1)");
        // N = ceil(ell * alpha * p), the sharp choice
        sp::Rational n_rat = sp::Rational(opt.ell) * alpha * sp::Rational(opt.p);
        n_cut = (n_rat.num() + n_rat.den() - 1) / n_rat.den();
    }
    sp::ConstructionParams params{opt.p, opt.ell, n_cut};
    sp::ConstructionReport rep = sp::construct_extremal(mul, params);
    sp::PolyaVinogradovReport pv = sp::polya_vinogradov_report(mul, params);

    double alpha_measured = static_cast<double>(rep.card) / static_cast<double>(opt.p);
    double bound = std::max(2.0 * static_cast<double>(opt.ell) * alpha_measured,
                            1.0 / static_cast<double>(opt.ell)) *
                   static_cast<double>(opt.p);

    sp::OutputFormat fmt = sp::parse_format(opt.format);
    OutputSink sink(opt.out);
    if (fmt == sp::OutputFormat::csv) {
        sink.stream() << "p,ell,n,card,sum_size,prod_size,bound,pv_deviation,pv_bound\n"
                      << opt.p << "," << opt.ell << "," << n_cut << "," << rep.card << ","
                      << rep.sum_size << "," << rep.prod_size << "," << bound << ","
                      << pv.deviation << "," << pv.bound << "\n";
    } else {
        sink.stream() << "{\"type\":\"construct\",\"p\":" << opt.p << ",\"ell\":" << opt.ell
                      << ",\"n\":" << n_cut << ",\"card\":" << rep.card
                      << ",\"sum_size\":" << rep.sum_size << ",\"prod_size\":" << rep.prod_size
                      << ",\"bound\":" << bound << ",\"pv_deviation\":" << pv.deviation
                      << ",\"pv_bound\":" << pv.bound
                      << ",\"witness\":\"" << sp::format_set_line(rep.witness) << "\"}\n";
    }
    return 0;
}

int cmd_regularity(const Options& opt) {
    if (opt.set_file.empty()) throw std::invalid_argument("regularity: a set file is required");
    if (opt.eps.empty()) throw std::invalid_argument("regularity: --eps is required");
    sp::Rational eps = sp::Rational::parse(opt.eps);
    double eps3 = eps.to_double() * eps.to_double() * eps.to_double();
    if (!(opt.delta > 0) || !(2.0 * std::sqrt(opt.delta) < eps3))
        throw std::invalid_argument("regularity: constraint 2*sqrt(delta) < eps^3 violated");

    sp::RegularityConfig cfg;
    cfg.c0 = opt.c0;
    cfg.c1 = opt.c1;
    cfg.arc_c = opt.arc_c;

    sp::OutputFormat fmt = sp::parse_format(opt.format);
    OutputSink sink(opt.out);
    for (const sp::GSet& set : sp::parse_set_file(opt.set_file)) {
        std::string key;
        if (!opt.cache.empty()) {
            std::ostringstream ks;
            ks << "regularity;set=" << sp::format_set_line(set) << ";delta=" << opt.delta
               << ";eps=" << eps.str();
            key = ks.str();
        }
        sp::SupersetReport rep;
        bool computed = false;
        if (!key.empty()) {
            sp::ResultCache cache(opt.cache);
            if (auto hit = cache.lookup(key)) {
                try {
                    sp::ParsedDecomposition pd = sp::parse_decomposition_json(*hit);
                    if (pd.group != set.group() || pd.delta != opt.delta)
                        throw std::invalid_argument("cached decomposition does not match the request");
                    rep = sp::superset_from_decomposition(set, eps, std::move(pd.report));
                    computed = true;
                    std::cerr << "cache hit: " << key << "\n";
                } catch (const std::exception& e) {
                    std::cerr << "cache entry rejected (" << e.what() << "); recomputing\n";
                }
            }
        }
        if (!computed) {
            rep = sp::structured_superset(set, eps, opt.delta, cfg);
            if (!key.empty()) {
                sp::ResultCache cache(opt.cache);
                cache.append(key, sp::serialize_decomposition(rep.decomposition, set.group(),
                                                              opt.delta,
                                                              sp::OutputFormat::json_lines));
            }
        }
        sink.stream() << sp::serialize_decomposition(rep.decomposition, set.group(), opt.delta, fmt)
                      << "\n";
        if (fmt == sp::OutputFormat::csv) {
            sink.stream() << "superset," << set.order() << "," << rep.removed_fraction << ","
                          << rep.popular_defect << "," << eps.str() << "\n";
        } else {
            sink.stream() << "{\"type\":\"superset\",\"p\":" << set.order()
                          << ",\"removed_fraction\":" << rep.removed_fraction
                          << ",\"popular_defect\":" << rep.popular_defect << ",\"eps\":\""
                          << eps.str() << "\",\"a_prime\":\"" << sp::format_set_line(rep.a_prime)
                          << "\"}\n";
        }
    }
    return 0;
}

int cmd_verify(const Options& opt) {
    OutputSink sink(opt.out);
    auto results = sp::run_suite(opt.suite); // throws on unknown suite
    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        sink.stream() << (r.pass ? "[ OK ] " : "[FAIL] ") << r.name << " (" << r.ms << " ms)"
                      << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    }
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"sum-product toolkit over prime fields: extremal thresholds, regularity "
                 "decompositions, sumset structure, and exhaustive searches"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "output format: json-lines or csv");
        sub->add_option("--out", opt.out, "write results to this file instead of stdout");
        sub->add_option("--cache", opt.cache, "append-only result cache file");
        sub->add_option("--workers", opt.workers, "worker thread count");
    };

    CLI::App* falpha = app.add_subcommand("falpha", "tabulate the extremal constant f(alpha)");
    falpha->add_option("--alpha", opt.alpha,
                       "rational list 'a/b,c/d,...' or range 'lo..hi:step'")
        ->required();
    add_common(falpha);

    CLI::App* search = app.add_subcommand("search", "minimize max(|A+A|,|A.A|)/p at fixed p");
    search->add_option("--p", opt.p, "prime field size")->required();
    search->add_option("--alpha", opt.alpha, "density floor (rational accepted)")->required();
    search->add_option("--mode", opt.mode, "exhaustive or structured");
    search->add_option("--exhaustive-limit", opt.exhaustive_limit, "largest p allowed exhaustively");
    add_common(search);

    CLI::App* construct = app.add_subcommand("construct", "interval-in-subgroup extremal construction");
    construct->add_option("--p", opt.p, "prime field size")->required();
    construct->add_option("--ell", opt.ell, "subgroup index, must divide p-1")->required();
    construct->add_option("--n", opt.n, "interval cutoff N");
    construct->add_option("--alpha", opt.alpha, "target density (sets N = ceil(ell*alpha*p))");
    add_common(construct);

    CLI::App* regularity = app.add_subcommand("regularity",
                                              "decompose sets and measure sumset structure");
    regularity->add_option("setfile", opt.set_file, "file of set literals, one per line")->required();
    regularity->add_option("--delta", opt.delta, "U2 target for the decomposition")->required();
    regularity->add_option("--eps", opt.eps, "structure parameter (rational)")->required();
    regularity->add_option("--c0", opt.c0, "energy increment floor constant");
    regularity->add_option("--c1", opt.c1, "correlation floor constant");
    regularity->add_option("--arc-c", opt.arc_c, "level-set arc length constant");
    add_common(regularity);

    CLI::App* verify = app.add_subcommand("verify", "run a named invariant suite");
    verify->add_option("suite", opt.suite, "spectral | pythagoras | kneser | gauss | counting | orbit | all")
        ->required();
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (falpha->parsed()) return cmd_falpha(opt);
        if (search->parsed()) return cmd_search(opt);
        if (construct->parsed()) return cmd_construct(opt);
        if (regularity->parsed()) return cmd_regularity(opt);
        if (verify->parsed()) return cmd_verify(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
