#include "sumprod/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sumprod {

namespace {

void require_one_bounded(const GridFunction& f, const char* who) {
    if (sup_norm(f) > 1.0 + 1e-12)
        throw std::invalid_argument(std::string(who) + ": function is not 1-bounded");
}

double energy(const GridFunction& f, const Factor& b) {
    GridFunction p = project(f, b);
    double acc = 0;
    for (const auto& v : p.values) acc += std::norm(v);
    return acc / static_cast<double>(p.values.size());
}

} // namespace

Factor Factor::trivial(const GroupSpec& g) {
    Factor f;
    f.group_ = g;
    f.cell_of_.assign(static_cast<std::size_t>(g.order), 0);
    f.cell_sizes_ = {g.order};
    f.m_ = 1;
    return f;
}

Factor Factor::from_cells(const GroupSpec& g, std::vector<std::int32_t> cell_of) {
    if (cell_of.size() != static_cast<std::size_t>(g.order))
        throw std::invalid_argument("Factor::from_cells: assignment length mismatch");
    std::int32_t m = 0;
    for (std::int32_t c : cell_of) {
        if (c < 0) throw std::invalid_argument("Factor::from_cells: negative cell id");
        m = std::max(m, static_cast<std::int32_t>(c + 1));
    }
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(m), 0);
    for (std::int32_t c : cell_of) ++sizes[static_cast<std::size_t>(c)];
    for (std::int64_t s : sizes)
        if (s == 0) throw std::invalid_argument("Factor::from_cells: empty cell id");
    Factor f;
    f.group_ = g;
    f.cell_of_ = std::move(cell_of);
    f.cell_sizes_ = std::move(sizes);
    f.m_ = m;
    return f;
}

bool Factor::refines(const Factor& coarser) const {
    if (group_ != coarser.group_) return false;
    std::vector<std::int32_t> maps_to(static_cast<std::size_t>(m_), -1);
    for (std::size_t x = 0; x < cell_of_.size(); ++x) {
        std::int32_t fine = cell_of_[x];
        std::int32_t coarse = coarser.cell_of_[x];
        if (maps_to[static_cast<std::size_t>(fine)] == -1)
            maps_to[static_cast<std::size_t>(fine)] = coarse;
        else if (maps_to[static_cast<std::size_t>(fine)] != coarse)
            return false;
    }
    return true;
}

GridFunction project(const GridFunction& f, const Factor& b) {
    if (f.group != b.group()) throw std::invalid_argument("project: group mismatch");
    std::vector<cplx> sums(static_cast<std::size_t>(b.cell_count()), cplx(0, 0));
    for (std::size_t x = 0; x < f.values.size(); ++x)
        sums[static_cast<std::size_t>(b.cell_of(static_cast<std::int64_t>(x)))] += f.values[x];
    for (std::int32_t c = 0; c < b.cell_count(); ++c)
        sums[static_cast<std::size_t>(c)] /= static_cast<double>(b.cell_size(c));
    GridFunction out = GridFunction::zero(f.group);
    for (std::size_t x = 0; x < out.values.size(); ++x)
        out.values[x] = sums[static_cast<std::size_t>(b.cell_of(static_cast<std::int64_t>(x)))];
    return out;
}

Factor refine_by_set(const Factor& b, const GSet& e) {
    if (b.group() != e.group()) throw std::invalid_argument("refine_by_set: group mismatch");
    const std::int64_t n = b.group().order;
    // id for (cell, in E) = 2c, (cell, not in E) = 2c+1, then compacted in id order.
    std::vector<std::int32_t> raw(static_cast<std::size_t>(n));
    std::vector<bool> used(static_cast<std::size_t>(2 * b.cell_count()), false);
    for (std::int64_t x = 0; x < n; ++x) {
        std::int32_t id = 2 * b.cell_of(x) + (e.contains(x) ? 0 : 1);
        raw[static_cast<std::size_t>(x)] = id;
        used[static_cast<std::size_t>(id)] = true;
    }
    std::vector<std::int32_t> remap(used.size(), -1);
    std::int32_t next = 0;
    for (std::size_t id = 0; id < used.size(); ++id)
        if (used[id]) remap[id] = next++;
    std::vector<std::int32_t> cells(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x)
        cells[static_cast<std::size_t>(x)] = remap[static_cast<std::size_t>(raw[static_cast<std::size_t>(x)])];
    return Factor::from_cells(b.group(), std::move(cells));
}

PythagorasGap pythagoras_gap(const GridFunction& f, const Factor& b_coarse, const Factor& b_fine) {
    if (!b_fine.refines(b_coarse))
        throw std::invalid_argument("pythagoras_gap: second factor does not refine the first");
    GridFunction pf = project(f, b_fine);
    GridFunction pc = project(f, b_coarse);
    double ef = 0, ec = 0, diff = 0;
    for (std::size_t x = 0; x < pf.values.size(); ++x) {
        ef += std::norm(pf.values[x]);
        ec += std::norm(pc.values[x]);
        diff += std::norm(pf.values[x] - pc.values[x]);
    }
    const double n = static_cast<double>(pf.values.size());
    return PythagorasGap{(ef - ec) / n, diff / n};
}

std::int64_t find_large_character(const GridFunction& g, double delta) {
    require_one_bounded(g, "find_large_character");
    Spectrum s = fourier(g);
    if (u2_norm(s) < delta)
        throw std::logic_error("find_large_character: ||g||_U2 < delta, caller broke the precondition");
    std::int64_t best = 0;
    double best_mag = -1;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        double m = std::abs(s.coeffs[i]);
        if (m > best_mag) { best_mag = m; best = static_cast<std::int64_t>(i); }
    }
    // ||ghat||_4^4 <= sup|ghat|^2 * ||ghat||_2^2 <= sup|ghat|^2 for 1-bounded g,
    // so the argmax is at least delta^2.
    if (best_mag < delta * delta - 1e-12)
        throw std::logic_error("find_large_character: argmax below delta^2 (internal error)");
    return best;
}

GSet level_set(const GroupSpec& g, std::int64_t gamma, double t, double len) {
    if (!(len > 0.0) || len >= 1.0) throw std::invalid_argument("level_set: need 0 < len < 1");
    t -= std::floor(t);
    GSet out(g);
    const double hi = t + len;
    for (std::int64_t x = 0; x < g.order; ++x) {
        double ph = char_phase(g, gamma, x);
        bool in = hi < 1.0 ? (ph >= t && ph <= hi) : (ph >= t || ph <= hi - 1.0);
        if (in) out.insert(x);
    }
    return out;
}

namespace {

struct GridScanResult {
    double t = 0;
    double correlation = -1;
    GSet set;
};

// Maximize |<g, 1_{E_t}>| over the t-grid {j/N : 0 <= j < N}, N = ceil(4/len).
// E_t only changes where an element phase enters or leaves [t, t+len], so the
// grid decomposes into runs of equal level sets; each run is scored once at
// its smallest grid offset, which reproduces the full scan with first-wins
// ties. N can exceed what a loop could visit (len ~ delta^2 with tiny delta),
// but the number of runs stays <= 2|G|+1.
GridScanResult scan_level_sets(const GridFunction& g, std::int64_t gamma, double len) {
    const GroupSpec& grp = g.group;
    const std::int64_t n = grp.order;
    const std::size_t un = static_cast<std::size_t>(n);
    double nt_real = std::ceil(4.0 / len);
    // Grid indices must stay exactly representable.
    const double nt = std::min(nt_real, 9007199254740992.0 / 4.0);

    std::vector<double> phases(un);
    for (std::int64_t x = 0; x < n; ++x)
        phases[static_cast<std::size_t>(x)] = char_phase(grp, gamma, x);

    std::vector<std::int64_t> order_idx(un);
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::stable_sort(order_idx.begin(), order_idx.end(),
                     [&](std::int64_t a, std::int64_t b) { return phases[a] < phases[b]; });
    std::vector<double> ph_sorted(un);
    std::vector<cplx> prefix(un + 1, cplx(0, 0));
    for (std::size_t i = 0; i < un; ++i) {
        ph_sorted[i] = phases[static_cast<std::size_t>(order_idx[i])];
        prefix[i + 1] = prefix[i] + g.values[static_cast<std::size_t>(order_idx[i])];
    }

    // Element x is in E_{j/nt} iff j/nt lies in [phase(x)-len, phase(x)] mod 1.
    // Collect candidate run starts in grid units.
    std::vector<double> starts;
    starts.reserve(2 * un + 2);
    starts.push_back(0.0);
    for (double ph : ph_sorted) {
        double lo = ph - len;
        double b = std::floor(ph * nt) + 1.0; // first offset past the window
        if (b < nt) starts.push_back(b);
        double a = lo >= 0.0 ? std::ceil(lo * nt) : std::ceil((lo + 1.0) * nt);
        if (a > 0.0 && a < nt) starts.push_back(a);
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

    double best_corr = -1, best_t = 0;
    for (double j : starts) {
        double t = j / nt;
        double hi = t + len;
        cplx acc(0, 0);
        if (hi < 1.0) {
            auto a = std::lower_bound(ph_sorted.begin(), ph_sorted.end(), t) - ph_sorted.begin();
            auto b = std::upper_bound(ph_sorted.begin(), ph_sorted.end(), hi) - ph_sorted.begin();
            if (a >= b) continue;
            acc = prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)];
        } else {
            auto a = std::lower_bound(ph_sorted.begin(), ph_sorted.end(), t) - ph_sorted.begin();
            auto b = std::upper_bound(ph_sorted.begin(), ph_sorted.end(), hi - 1.0) - ph_sorted.begin();
            if (a >= static_cast<std::ptrdiff_t>(un) && b <= 0) continue;
            acc = (prefix[un] - prefix[static_cast<std::size_t>(a)]) + prefix[static_cast<std::size_t>(b)];
        }
        double corr = std::abs(acc) / static_cast<double>(n);
        if (corr > best_corr) {
            best_corr = corr;
            best_t = t;
        }
    }

    GridScanResult best;
    best.correlation = best_corr;
    best.t = best_t;
    if (best_corr >= 0) best.set = level_set(grp, gamma, best_t, len);
    return best;
}

} // namespace

Factor energy_increment_step(const GridFunction& f, const Factor& b, double delta,
                             const RegularityConfig& cfg, IncrementChoice* choice) {
    if (f.group != b.group()) throw std::invalid_argument("energy_increment_step: group mismatch");
    require_one_bounded(f, "energy_increment_step");

    GridFunction g = f;
    GridFunction fb = project(f, b);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= fb.values[i];

    Spectrum gs = fourier(g);
    double u2 = u2_norm(gs);
    if (u2 <= delta)
        throw std::logic_error("energy_increment_step: ||f - f_B||_U2 <= delta, nothing to do");

    std::int64_t gamma = 0;
    double best_mag = -1;
    for (std::size_t i = 0; i < gs.coeffs.size(); ++i) {
        double m = std::abs(gs.coeffs[i]);
        if (m > best_mag) { best_mag = m; gamma = static_cast<std::int64_t>(i); }
    }

    const double len = cfg.arc_c * delta * delta;
    GridScanResult scan = scan_level_sets(g, gamma, len);

    const double corr_floor = cfg.c1 * delta * delta * delta * delta;
    if (scan.correlation < corr_floor) {
        std::ostringstream os;
        os << "energy_increment_step: no grid offset reaches the correlation floor ("
           << "best |<g,1_E>| = " << scan.correlation << " < c1*delta^4 = " << corr_floor
           << "; gamma = " << gamma << ", |ghat| = " << best_mag << ", u2 = " << u2
           << ", arc = " << len << ", cells = " << b.cell_count() << ")";
        throw IncrementFloorError(os.str());
    }

    Factor refined = refine_by_set(b, scan.set);
    double gain = energy(f, refined) - energy(f, b);
    const double gain_floor = cfg.c0 * std::pow(delta, 8.0);
    if (gain < gain_floor) {
        std::ostringstream os;
        os << "energy_increment_step: energy gain " << gain << " below floor c0*delta^8 = "
           << gain_floor << " (gamma = " << gamma << ", t = " << scan.t
           << ", corr = " << scan.correlation << ", cells " << b.cell_count() << " -> "
           << refined.cell_count() << ")";
        throw IncrementFloorError(os.str());
    }

    if (choice) *choice = IncrementChoice{gamma, scan.t, len, scan.correlation};
    return refined;
}

std::int64_t weak_regularity_iteration_cap(double delta, const RegularityConfig& cfg) {
    double cap = std::ceil(1.0 / (cfg.c0 * std::pow(delta, 8.0)));
    if (cap > 9e18) return INT64_MAX;
    return static_cast<std::int64_t>(cap);
}

DecompositionReport weak_regularity(const GridFunction& f, double delta, const RegularityConfig& cfg) {
    require_one_bounded(f, "weak_regularity");
    if (!(delta > 0.0) || delta >= 0.5)
        throw std::invalid_argument("weak_regularity: need 0 < delta < 1/2");

    DecompositionReport rep;
    rep.factor = Factor::trivial(f.group);
    rep.energy_trace.push_back(energy(f, rep.factor));
    const std::int64_t cap = weak_regularity_iteration_cap(delta, cfg);

    while (true) {
        GridFunction fb = project(f, rep.factor);
        GridFunction g = f;
        for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] -= fb.values[i];
        rep.final_u2 = u2_norm(g);
        if (rep.final_u2 <= delta) break;
        if (rep.iterations >= cap) {
            std::ostringstream os;
            os << "weak_regularity: iteration cap " << cap << " exceeded at u2 = " << rep.final_u2
               << " (delta = " << delta << "); the configured constants are inconsistent";
            throw IncrementFloorError(os.str());
        }
        IncrementChoice choice;
        rep.factor = energy_increment_step(f, rep.factor, delta, cfg, &choice);
        rep.chosen.push_back(choice);
        rep.energy_trace.push_back(energy(f, rep.factor));
        ++rep.iterations;
    }
    return rep;
}

SupersetReport superset_from_decomposition(const GSet& a, const Rational& eps,
                                           DecompositionReport decomposition) {
    if (!(eps > Rational(0)) || !(eps < Rational(1, 2)))
        throw std::invalid_argument("structured_superset: need 0 < eps < 1/2");
    if (decomposition.factor.group() != a.group())
        throw std::invalid_argument("structured_superset: decomposition group mismatch");

    const GroupSpec& g = a.group();
    SupersetReport rep;
    rep.decomposition = std::move(decomposition);
    const Factor& b = rep.decomposition.factor;

    // Cells where the projected density is at least eps, compared exactly.
    std::vector<std::int64_t> in_cell(static_cast<std::size_t>(b.cell_count()), 0);
    for (std::int64_t x : a.elements()) ++in_cell[static_cast<std::size_t>(b.cell_of(x))];
    GSet a_prime(g);
    for (std::int64_t x = 0; x < g.order; ++x) {
        std::int32_t c = b.cell_of(x);
        if (static_cast<__int128>(in_cell[static_cast<std::size_t>(c)]) * eps.den() >=
            static_cast<__int128>(eps.num()) * b.cell_size(c))
            a_prime.insert(x);
    }
    rep.a_prime = a_prime;

    std::int64_t removed = a.difference(a_prime).card();
    std::int64_t defect = popular_sums(a_prime, eps).difference(sumset(a, a)).card();
    rep.removed_fraction = static_cast<double>(removed) / static_cast<double>(g.order);
    rep.popular_defect = static_cast<double>(defect) / static_cast<double>(g.order);

    if (static_cast<__int128>(removed) * eps.den() > static_cast<__int128>(eps.num()) * g.order ||
        static_cast<__int128>(defect) * eps.den() > static_cast<__int128>(eps.num()) * g.order)
        throw std::logic_error("structured_superset: measured defect exceeds eps (internal error)");
    return rep;
}

SupersetReport structured_superset(const GSet& a, const Rational& eps, double delta,
                                   const RegularityConfig& cfg) {
    if (!(eps > Rational(0)) || !(eps < Rational(1, 2)))
        throw std::invalid_argument("structured_superset: need 0 < eps < 1/2");
    double eps3 = eps.to_double() * eps.to_double() * eps.to_double();
    if (!(2.0 * std::sqrt(delta) < eps3))
        throw std::invalid_argument("structured_superset: constraint 2*sqrt(delta) < eps^3 violated");
    return superset_from_decomposition(a, eps, weak_regularity(to_indicator(a), delta, cfg));
}

RestrictReport popular_restrict(const GSet& a, const Rational& delta, const Rational& eps) {
    if (!(delta > Rational(0)) || !(delta < Rational(1, 2)) ||
        !(eps > Rational(0)) || !(eps < Rational(1, 2)))
        throw std::invalid_argument("popular_restrict: need 0 < delta, eps < 1/2");

    const GroupSpec& g = a.group();
    GSet popular = popular_sums(a, delta); // from the original A
    GSet cur = a;
    RestrictReport rep;

    while (cur.card() > 0) {
        GSet unpopular = sumset(cur, cur).difference(popular);
        if (unpopular.empty_set()) break;
        // a + b in U  <=>  b in U - a
        std::int64_t best = -1, best_count = -1;
        for (std::int64_t x : cur.elements()) {
            GSet hits = cur & translate(unpopular, g.neg(x));
            if (hits.card() > best_count) { best_count = hits.card(); best = x; }
        }
        cur.erase(best);
        rep.removed.push_back(best);
    }
    if (cur.card() > 0) {
        rep.unpopular_fraction =
            static_cast<double>(sumset(cur, cur).difference(popular).card()) / static_cast<double>(g.order);
    }
    rep.a_prime = cur;
    rep.removed_fraction = static_cast<double>(rep.removed.size()) / static_cast<double>(g.order);
    rep.within_eps = Rational(static_cast<std::int64_t>(rep.removed.size()), g.order) <= eps;
    return rep;
}

std::vector<MeasurabilityProbe> measurability_probe(const GSet& e, std::span<const double> m_list) {
    const GroupSpec& g = e.group();
    const std::size_t n = static_cast<std::size_t>(g.order);
    Spectrum s = fourier(to_indicator(e));

    std::vector<std::size_t> order_idx(n);
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::stable_sort(order_idx.begin(), order_idx.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(s.coeffs[i]) > std::abs(s.coeffs[j]);
    });
    // Tail L2 energy after keeping the top k coefficients.
    std::vector<double> tail(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;) tail[k] = tail[k + 1] + std::norm(s.coeffs[order_idx[k]]);

    auto build_clamped = [&](std::size_t k) {
        Spectrum trunc{g, std::vector<cplx>(n, cplx(0, 0))};
        for (std::size_t i = 0; i < k; ++i) trunc.coeffs[order_idx[i]] = s.coeffs[order_idx[i]];
        GridFunction f = inverse_fourier(trunc);
        for (auto& v : f.values) {
            double m = std::abs(v);
            if (m > 1.0) v /= m;
        }
        return f;
    };

    GridFunction ind = to_indicator(e);
    std::vector<MeasurabilityProbe> out;
    for (double m : m_list) {
        if (!(m > 0)) throw std::invalid_argument("measurability_probe: M must be positive");
        const double target = 1.0 / m;
        std::size_t k = 1;
        while (k < n && std::sqrt(tail[k]) > target) ++k;
        MeasurabilityProbe probe;
        probe.m = m;
        GridFunction fs;
        while (true) {
            fs = build_clamped(k);
            double err2 = 0;
            for (std::size_t x = 0; x < n; ++x) err2 += std::norm(ind.values[x] - fs.values[x]);
            probe.achieved_l2_error = std::sqrt(err2 / static_cast<double>(n));
            if (probe.achieved_l2_error <= target || k == n) break;
            ++k;
        }
        probe.truncation_size = static_cast<std::int64_t>(k);
        probe.met_target = probe.achieved_l2_error <= target;
        probe.achieved_spectral_l1 = spectrum_l1(fourier(fs));
        out.push_back(probe);
    }
    return out;
}

CountingReport counting_lemma_report(const GridFunction& f, const GridFunction& g, double delta) {
    require_one_bounded(f, "counting_lemma_report");
    require_one_bounded(g, "counting_lemma_report");
    if (u2_norm(g) > delta + 1e-12)
        throw std::invalid_argument("counting_lemma_report: ||g||_U2 > delta");
    GridFunction conv = convolve(f, g);
    const double threshold = std::sqrt(delta);
    CountingReport rep;
    for (const auto& v : conv.values)
        if (std::abs(v) > threshold) ++rep.exceed_count;
    rep.bound_count = static_cast<std::int64_t>(std::floor(delta * static_cast<double>(f.group.order)));
    rep.holds = rep.exceed_count <= rep.bound_count;
    return rep;
}

} // namespace sumprod
