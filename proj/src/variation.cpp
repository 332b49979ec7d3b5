#include "hdcam/variation.hpp"

#include <algorithm>
#include <stdexcept>

#include "hdcam/errors.hpp"
#include "hdcam/rng.hpp"

namespace hdcam {

namespace {
// CounterRng domain tags; keep distinct from the read-simulation domains in
// genomics.cpp.
constexpr std::uint32_t kDomainTrial = 1;
} // namespace

Corner Corner::by_name(const std::string& name) {
    if (name == "TT") return TT();
    if (name == "FF") return FF();
    if (name == "SS") return SS();
    throw std::invalid_argument("Corner: unknown name '" + name + "'");
}

void Corner::validate() const {
    if (!(conductance_multiplier > 0))
        throw std::invalid_argument("Corner: conductance multiplier must be > 0");
}

void VariationSpec::validate() const {
    corner.validate();
    if (sigma_g < 0) throw std::invalid_argument("VariationSpec: sigma_g must be >= 0");
    if (sigma_t < 0) throw std::invalid_argument("VariationSpec: sigma_t must be >= 0");
    if (trials < 1) throw std::invalid_argument("VariationSpec: trials must be >= 1");
}

double MatchCurve::probability(unsigned d) const {
    if (d < d_min || d > d_max()) throw std::out_of_range("MatchCurve: distance out of range");
    return static_cast<double>(match_counts[d - d_min]) / static_cast<double>(trials);
}

Decision sample_trial(const MatchlineParams& params, const VariationSpec& spec, unsigned d,
                      std::uint64_t trial_index) {
    if (d > params.word_bits)
        throw std::invalid_argument("sample_trial: d exceeds word width");
    CounterRng rng(spec.seed, kDomainTrial, trial_index, d);

    double m_eff;
    if (spec.sigma_g > 0) {
        m_eff = 0.0;
        for (unsigned i = 0; i < d; ++i)
            m_eff += spec.corner.conductance_multiplier * rng.next_lognormal(spec.sigma_g);
    } else {
        m_eff = spec.corner.conductance_multiplier * static_cast<double>(d);
    }

    double t = params.t_eval;
    if (spec.sigma_t > 0) {
        do {
            t = params.t_eval + spec.sigma_t * rng.next_normal();
        } while (t <= 0);  // evaluation cannot end before it starts
    }

    return decide(ml_voltage(m_eff, params, t), params.v_evalth);
}

MatchCurve match_probability_curve_serial(const MatchlineParams& params,
                                          const VariationSpec& spec, unsigned d_min,
                                          unsigned d_max) {
    params.validate();
    spec.validate();
    if (d_max < d_min) throw std::invalid_argument("match_probability_curve: empty range");
    if (d_max > params.word_bits)
        throw std::invalid_argument("match_probability_curve: range exceeds word width");

    MatchCurve curve{d_min, spec.trials, std::vector<unsigned>(d_max - d_min + 1, 0)};
    for (unsigned d = d_min; d <= d_max; ++d)
        for (unsigned trial = 0; trial < spec.trials; ++trial)
            if (sample_trial(params, spec, d, trial) == Decision::Match)
                ++curve.match_counts[d - d_min];
    return curve;
}

MatchCurve match_probability_curve(const MatchlineParams& params, const VariationSpec& spec,
                                   unsigned d_min, unsigned d_max) {
    params.validate();
    spec.validate();
    if (d_max < d_min) throw std::invalid_argument("match_probability_curve: empty range");
    if (d_max > params.word_bits)
        throw std::invalid_argument("match_probability_curve: range exceeds word width");

    const unsigned nd = d_max - d_min + 1;
    MatchCurve curve{d_min, spec.trials, std::vector<unsigned>(nd, 0)};
    const long long total = static_cast<long long>(nd) * spec.trials;
    // Each (d, trial) cell draws from its own counter-based stream, so the
    // flattened loop partitions freely; counts aggregate by addition.
#pragma omp parallel for schedule(static)
    for (long long idx = 0; idx < total; ++idx) {
        const unsigned d = d_min + static_cast<unsigned>(idx / spec.trials);
        const unsigned trial = static_cast<unsigned>(idx % spec.trials);
        if (sample_trial(params, spec, d, trial) == Decision::Match) {
#pragma omp atomic
            ++curve.match_counts[d - d_min];
        }
    }
    return curve;
}

double sensitivity(const ConfusionCounts& counts) {
    if (counts.tp + counts.fn == 0)
        throw undefined_metric_error("sensitivity: no expected-positive trials (TP + FN == 0)");
    return static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
}

double specificity(const ConfusionCounts& counts) {
    if (counts.tn + counts.fp == 0)
        throw undefined_metric_error("specificity: no expected-negative trials (TN + FP == 0)");
    return static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
}

std::vector<LabeledMetric> sens_spec_vs_hd(const MatchCurve& curve, unsigned mt) {
    std::vector<LabeledMetric> out;
    out.reserve(curve.match_counts.size());
    for (unsigned d = curve.d_min; d <= curve.d_max(); ++d) {
        const double p = curve.probability(d);
        if (d <= mt)
            out.push_back({d, true, p});
        else
            out.push_back({d, false, 1.0 - p});
    }
    return out;
}

UncertaintyRegion uncertainty_region(const MatchCurve& curve) {
    int k = -1;
    for (unsigned d = curve.d_min; d <= curve.d_max(); ++d)
        if (curve.match_counts[d - curve.d_min] == curve.trials) k = static_cast<int>(d);
    if (k < 0)
        throw region_unbounded_error(
            "uncertainty_region: no guaranteed-match bound (probability never reaches 1)");
    int l = -1;
    for (unsigned d = static_cast<unsigned>(k) + 1; d <= curve.d_max(); ++d)
        if (curve.match_counts[d - curve.d_min] == 0) {
            l = static_cast<int>(d);
            break;
        }
    if (l < 0)
        throw region_unbounded_error(
            "uncertainty_region: no guaranteed-mismatch bound (probability never reaches 0)");
    return {static_cast<unsigned>(k), static_cast<unsigned>(l)};
}

CompensationResult corner_compensation(unsigned target_mt, const Corner& corner,
                                       const MatchlineParams& base,
                                       const CompensationGrid& grid) {
    corner.validate();
    if (grid.v_evals.empty() || grid.v_evalths.empty())
        throw std::invalid_argument("corner_compensation: empty grid");

    bool found = false;
    CompensationResult best{0, 0, 0};
    long long best_diff = 0;
    for (double ve : grid.v_evals) {
        for (double vth : grid.v_evalths) {
            MatchlineParams p = base;
            p.v_eval = ve;
            p.v_evalth = vth;
            const unsigned mt = nominal_mt(p, corner.conductance_multiplier);
            const long long diff =
                std::abs(static_cast<long long>(mt) - static_cast<long long>(target_mt));
            const bool better =
                !found || diff < best_diff ||
                (diff == best_diff &&
                 (ve < best.v_eval || (ve == best.v_eval && vth < best.v_evalth)));
            if (better) {
                found = true;
                best = {ve, vth, mt};
                best_diff = diff;
            }
        }
    }
    return best;
}

} // namespace hdcam
