#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sumprod/rational.hpp"
#include "sumprod/setops.hpp"
#include "sumprod/spectral.hpp"

namespace sumprod {

/**
 * A partition of the group into labeled cells. Cell ids are dense in [0, m)
 * and no cell is empty.
 */
class Factor {
public:
    Factor() = default;

    static Factor trivial(const GroupSpec& g);
    static Factor from_cells(const GroupSpec& g, std::vector<std::int32_t> cell_of);

    const GroupSpec& group() const { return group_; }
    std::int32_t cell_count() const { return m_; }
    std::int32_t cell_of(std::int64_t x) const { return cell_of_[static_cast<std::size_t>(x)]; }
    std::span<const std::int32_t> cells() const { return cell_of_; }
    std::int64_t cell_size(std::int32_t c) const { return cell_sizes_[static_cast<std::size_t>(c)]; }
    std::span<const std::int64_t> cell_sizes() const { return cell_sizes_; }

    // True when every cell of *this lies inside one cell of `coarser`.
    bool refines(const Factor& coarser) const;

    friend bool operator==(const Factor& a, const Factor& b) {
        return a.group_ == b.group_ && a.cell_of_ == b.cell_of_;
    }

private:
    GroupSpec group_;
    std::vector<std::int32_t> cell_of_;
    std::vector<std::int64_t> cell_sizes_;
    std::int32_t m_ = 0;
};

// Conditional expectation f_B: constant on each cell, equal to the cell mean.
GridFunction project(const GridFunction& f, const Factor& b);

// Split every cell into its E-part and complement; empty parts dropped,
// ids compacted in (old cell, E first) order.
Factor refine_by_set(const Factor& b, const GSet& e);

struct PythagorasGap {
    double lhs = 0; // ||f_B'||_2^2 - ||f_B||_2^2
    double rhs = 0; // ||f_B' - f_B||_2^2
};

// Both sides of the refinement identity; throws unless b_fine refines b_coarse.
PythagorasGap pythagoras_gap(const GridFunction& f, const Factor& b_coarse, const Factor& b_fine);

// Argmax of |ghat| with smallest-index tie-break. Requires ||g||_{U^2} >= delta
// (caller logic error otherwise); the returned character has |ghat| >= delta^2.
std::int64_t find_large_character(const GridFunction& g, double delta);

// {x : gamma(x) in [t, t+len] mod 1}, endpoints included, wraparound handled.
GSet level_set(const GroupSpec& g, std::int64_t gamma, double t, double len);

struct RegularityConfig {
    double c0 = 1.0 / 64;  // energy increment floor c0 * delta^8
    double c1 = 1.0 / 8;   // correlation floor c1 * delta^4
    double arc_c = 0.0795774715459476678; // arc length arc_c * delta^2 (1/(4 pi))
};

struct IncrementChoice {
    std::int64_t gamma = 0;
    double t = 0;
    double len = 0;
    double correlation = 0;
};

// Raised when no grid offset reaches the configured correlation floor, or the
// refinement gains less energy than the configured increment floor.
class IncrementFloorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One energy-increment step: refine B by the best level set of the large
// character of g = f - f_B, scanning a uniform grid of ceil(4/len) offsets.
Factor energy_increment_step(const GridFunction& f, const Factor& b, double delta,
                             const RegularityConfig& cfg = {}, IncrementChoice* choice = nullptr);

struct DecompositionReport {
    Factor factor;
    std::int64_t iterations = 0;
    std::vector<double> energy_trace; // ||f_B||_2^2 per step, starting at the trivial factor
    double final_u2 = 0;
    std::vector<IncrementChoice> chosen;
};

// Iterate energy_increment_step from the trivial factor until
// ||f - f_B||_{U^2} <= delta. Deterministic.
DecompositionReport weak_regularity(const GridFunction& f, double delta,
                                    const RegularityConfig& cfg = {});

std::int64_t weak_regularity_iteration_cap(double delta, const RegularityConfig& cfg = {});

struct SupersetReport {
    GSet a_prime;
    double removed_fraction = 0;  // |A \ A'| / |G|
    double popular_defect = 0;    // |S_eps(A') \ (A+A)| / |G|
    DecompositionReport decomposition;
};

// Structure of sumsets: A' = union of cells where (1_A)_B >= eps. Both
// measured defects are asserted <= eps. Requires 2 sqrt(delta) < eps^3.
SupersetReport structured_superset(const GSet& a, const Rational& eps, double delta,
                                   const RegularityConfig& cfg = {});

// Same measurement from an existing decomposition of 1_A (e.g. one reloaded
// from the cache); asserts the same defect bounds.
SupersetReport superset_from_decomposition(const GSet& a, const Rational& eps,
                                           DecompositionReport decomposition);

struct RestrictReport {
    GSet a_prime;
    double removed_fraction = 0;   // |A \ A'| / |G|, reported against eps, not asserted
    double unpopular_fraction = 0; // |(A'+A') \ S_delta(A)| / |G|, driven to zero
    std::vector<std::int64_t> removed;
    bool within_eps = false;
};

// Greedy popular-sum restriction: repeatedly drop the element of A' meeting
// the most sums outside S_delta(A).
RestrictReport popular_restrict(const GSet& a, const Rational& delta, const Rational& eps);

struct MeasurabilityProbe {
    double m = 0;
    double achieved_l2_error = 0;
    double achieved_spectral_l1 = 0;
    std::int64_t truncation_size = 0;
    bool met_target = true;
};

// Empirical growth data: smallest spectral truncation of 1_E (clamped to the
// unit disc) with L2 error <= 1/M, and the l1 mass it needs.
std::vector<MeasurabilityProbe> measurability_probe(const GSet& e, std::span<const double> m_list);

struct CountingReport {
    std::int64_t exceed_count = 0; // #{x : |(f*g)(x)| > sqrt(delta)}
    std::int64_t bound_count = 0;  // floor(delta |G|)
    bool holds = false;
};

// Counting lemma check: for 1-bounded f, g with ||g||_{U^2} <= delta the
// exceedance set has size at most delta|G|.
CountingReport counting_lemma_report(const GridFunction& f, const GridFunction& g, double delta);

} // namespace sumprod
