#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdcam/matchline.hpp"

namespace hdcam {

// Process corner as a conductance multiplier on every cell's discharge
// path. Fast silicon discharges harder, slow silicon softer; the default
// multipliers are chosen so corner compensation moves v_eval in the
// published direction and are fully configurable.
struct Corner {
    std::string name = "TT";
    double conductance_multiplier = 1.0;

    static Corner TT() { return {"TT", 1.0}; }
    static Corner FF() { return {"FF", 1.5}; }
    static Corner SS() { return {"SS", 0.67}; }
    static Corner by_name(const std::string& name);

    void validate() const;
};

struct VariationSpec {
    Corner corner = Corner::TT();
    double sigma_g = 0.1;   // stddev of log per-cell conductance multiplier
    double sigma_t = 0.0;   // stddev of t_eval jitter, seconds
    std::uint64_t seed = 0;
    unsigned trials = 1000;

    void validate() const;
};

// Empirical match probability per Hamming distance over a contiguous range.
struct MatchCurve {
    unsigned d_min = 0;
    unsigned trials = 0;
    std::vector<unsigned> match_counts;  // index i holds distance d_min + i

    unsigned d_max() const { return d_min + static_cast<unsigned>(match_counts.size()) - 1; }
    double probability(unsigned d) const;
};

// Band of distances where variation makes the outcome probabilistic:
// below k_bound every trial matched, at l_bound and above none did.
struct UncertaintyRegion {
    unsigned k_bound;
    unsigned l_bound;
    unsigned width() const { return l_bound - k_bound - 1; }
};

struct ConfusionCounts {
    std::uint64_t tp = 0, fn = 0, tn = 0, fp = 0;
};

// One Monte-Carlo draw at Hamming distance d: per-cell lognormal
// conductance multipliers scaled by the corner, plus truncated-normal
// sampling-time jitter. Pure function of (spec.seed, trial_index, d);
// thread count and evaluation order cannot change the outcome.
Decision sample_trial(const MatchlineParams& params, const VariationSpec& spec, unsigned d,
                      std::uint64_t trial_index);

// spec.trials draws per distance in [d_min, d_max]. The default fans the
// (distance, trial) grid out under OpenMP; the serial variant is the
// reference both must agree with bit-exactly.
MatchCurve match_probability_curve(const MatchlineParams& params, const VariationSpec& spec,
                                   unsigned d_min, unsigned d_max);
MatchCurve match_probability_curve_serial(const MatchlineParams& params,
                                          const VariationSpec& spec, unsigned d_min,
                                          unsigned d_max);

// TP / (TP + FN) and TN / (TN + FP); empty denominators are an error, never
// a silent 0 or 1.
double sensitivity(const ConfusionCounts& counts);
double specificity(const ConfusionCounts& counts);

// Per-distance metric derived from a match curve at mismatch threshold mt:
// distances at or below mt are expected matches (sensitivity = match
// probability), distances above are expected mismatches (specificity =
// 1 - match probability). The d == mt trials count toward sensitivity.
struct LabeledMetric {
    unsigned d;
    bool expected_match;
    double value;  // sensitivity when expected_match, else specificity
};
std::vector<LabeledMetric> sens_spec_vs_hd(const MatchCurve& curve, unsigned mt);

// k_bound = largest d with empirical probability exactly 1, l_bound =
// smallest larger d with probability exactly 0. Throws region_unbounded_error
// naming the missing side when the scanned range covers neither plateau.
UncertaintyRegion uncertainty_region(const MatchCurve& curve);

struct CompensationGrid {
    std::vector<double> v_evals;
    std::vector<double> v_evalths;
};

struct CompensationResult {
    double v_eval;
    double v_evalth;
    unsigned achieved_mt;
};

// Grid point whose nominal mismatch threshold under the corner lands
// closest to target_mt; ties prefer smaller v_eval, then smaller v_evalth.
CompensationResult corner_compensation(unsigned target_mt, const Corner& corner,
                                       const MatchlineParams& base,
                                       const CompensationGrid& grid);

} // namespace hdcam
