#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hdcam {

// Behavioral discharge law for the matchline. The stretched exponential
//
//   V(m, t) = V_DD * exp(-(m * t / tau)^beta)
//
// is the default: a log-log regression of the published mismatch-threshold
// vs V_evalth table is nearly linear, so two parameters reproduce the whole
// sweep. The effective time constant scales linearly with word width
// (matchline capacitance grows with row length) and exponentially with the
// evaluation-gate drive:
//
//   tau_eff = tau_ref * (word_bits / cap_ref_bits) * exp(-(v_eval - v_eval_ref) / slope_s)
enum class LawKind { stretched_exponential, linear_current, user_table };

struct DischargeLaw {
    LawKind kind = LawKind::stretched_exponential;
    // Defaults calibrated so the nominal mismatch threshold reproduces the
    // published 49 @ 60% VDD and 155 @ 15% VDD anchor points exactly
    // (256-bit word, t_eval 1 ns, v_eval 0.60 V).
    double tau_ref = 8.894354856002195e-08;  // seconds at the calibration anchor
    double beta = 1.1462346536828851;        // shape exponent
    double v_eval_ref = 0.60;                // volts, calibration anchor
    double slope_s = 0.12;                   // volts, conductance-voltage sensitivity
    std::size_t cap_ref_bits = 256;          // word width tau_ref was calibrated at

    // user_table only: (x = m_eff * t / tau_eff, V/V_DD) samples, x strictly
    // increasing, normalized voltage strictly decreasing.
    std::vector<std::pair<double, double>> table;

    void validate() const;
    double effective_tau(std::size_t word_bits, double v_eval) const;
};

struct MatchlineParams {
    double v_dd = 1.2;             // volts
    double v_eval = 0.60;          // volts, evaluation-transistor gate drive
    double v_evalth = 0.72;        // volts, sense threshold (default 60% VDD)
    double t_eval = 1e-9;          // seconds
    double precharge_time = 1e-9;  // seconds
    std::size_t word_bits = 256;
    DischargeLaw law;

    void validate() const;
    // Full gate drive collapses to conventional exact-match CAM behavior.
    bool exact_match_mode() const { return v_eval >= v_dd - 1e-3; }
};

enum class Decision { Match, Mismatch };

// Sampled matchline voltage for an effective mismatch weight m_eff (sum of
// per-cell conductance multipliers; integer d in the nominal case) at time t
// after evaluation starts. m_eff == 0 keeps the line at V_DD.
double ml_voltage(double m_eff, const MatchlineParams& params, double t);

// Sense decision; the tie at v_ml == v_evalth resolves to Match so the
// nominal mismatch threshold is a well-defined maximum.
Decision decide(double v_ml, double v_evalth);

// Largest mismatch count that still yields Match at t_eval, by binary search
// over [0, word_bits] (ml_voltage is decreasing in m_eff). corner_multiplier
// scales every cell's conductance (process corner).
unsigned nominal_mt(const MatchlineParams& params, double corner_multiplier = 1.0);

// One (V_evalth fraction of V_DD, mismatch threshold) calibration point.
struct MtPoint {
    double vth_fraction;
    unsigned mt;
};

struct CalibrationResult {
    DischargeLaw law;
    std::vector<MtPoint> points;        // input points, sorted by fraction
    std::vector<double> rel_residuals;  // per point, (model - given) / given
    double max_abs_residual;
};

// Least-squares fit of (tau_ref, beta) in log-log space from the inverted
// stretched exponential MT(vth) = (tau / t_eval) * ln(v_dd / vth)^(1/beta).
// Needs >= 2 points with distinct thresholds; MT must decrease as the
// threshold fraction rises. The skeleton supplies t_eval and the anchor
// (v_eval, word width) the fit is pinned to.
CalibrationResult calibrate(const std::vector<MtPoint>& points, const MatchlineParams& skeleton);

// Energy per bit per search (femtojoules), characterized on a 256-bit word
// at the TT corner for v_eval in {0.4, 0.5, 0.6} V and mismatch counts
// {1, 16, 32, 64, 96, 128}. Exact-match searches cost a flat 0.404 fJ.
struct EnergyTable {
    static constexpr double exact_match_fj = 0.404;
    static const EnergyTable& builtin();

    std::vector<double> v_evals;
    std::vector<double> bits;
    std::vector<std::vector<double>> fj;  // fj[v_eval index][bits index]
};

// Bilinear interpolation over the table grid; mismatching_bits clamps to the
// characterized [1, 128] range, v_eval outside the grid (and not exact-match
// mode) is out of model. exact_match true returns the flat exact-search cost.
double energy_per_bit(double v_eval, double mismatching_bits, const EnergyTable& table,
                      bool exact_match = false);

struct Throughput {
    double searches_per_s;
    double bit_compares_per_s;
};

// Precharge and evaluation pipeline: every precharge cycle hides the sense
// of the previous evaluation, so one search completes per (precharge +
// evaluation) period.
Throughput throughput(const MatchlineParams& params, std::size_t array_rows,
                      std::size_t word_bits);

} // namespace hdcam
