#include "hdcam/matchline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hdcam/errors.hpp"

namespace hdcam {

void DischargeLaw::validate() const {
    if (!(tau_ref > 0)) throw std::invalid_argument("DischargeLaw: tau_ref must be > 0");
    if (!(beta > 0)) throw std::invalid_argument("DischargeLaw: beta must be > 0");
    if (!(slope_s > 0)) throw std::invalid_argument("DischargeLaw: slope_s must be > 0");
    if (cap_ref_bits == 0) throw std::invalid_argument("DischargeLaw: cap_ref_bits must be > 0");
    if (kind == LawKind::user_table) {
        if (table.size() < 2) throw std::invalid_argument("DischargeLaw: user table needs >= 2 points");
        for (std::size_t i = 1; i < table.size(); ++i) {
            if (!(table[i].first > table[i - 1].first))
                throw std::invalid_argument("DischargeLaw: user table x must be strictly increasing");
            if (!(table[i].second < table[i - 1].second))
                throw std::invalid_argument("DischargeLaw: user table voltage must be strictly decreasing");
        }
    }
}

double DischargeLaw::effective_tau(std::size_t word_bits, double v_eval) const {
    const double width_scale = static_cast<double>(word_bits) / static_cast<double>(cap_ref_bits);
    return tau_ref * width_scale * std::exp(-(v_eval - v_eval_ref) / slope_s);
}

void MatchlineParams::validate() const {
    if (!(v_dd > 0)) throw std::invalid_argument("MatchlineParams: v_dd must be > 0");
    if (!(v_evalth > 0 && v_evalth < v_dd))
        throw std::invalid_argument("MatchlineParams: v_evalth must be in (0, v_dd)");
    if (!(v_eval > 0 && v_eval <= v_dd))
        throw std::invalid_argument("MatchlineParams: v_eval must be in (0, v_dd]");
    if (!(t_eval > 0)) throw std::invalid_argument("MatchlineParams: t_eval must be > 0");
    if (!(precharge_time > 0))
        throw std::invalid_argument("MatchlineParams: precharge_time must be > 0");
    if (word_bits == 0) throw std::invalid_argument("MatchlineParams: word_bits must be > 0");
    law.validate();
}

namespace {

double table_lookup(const std::vector<std::pair<double, double>>& table, double x) {
    if (x <= table.front().first) return table.front().second;
    if (x >= table.back().first) return table.back().second;
    auto hi = std::upper_bound(table.begin(), table.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double w = (x - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

} // namespace

double ml_voltage(double m_eff, const MatchlineParams& params, double t) {
    if (m_eff < 0) throw std::invalid_argument("ml_voltage: m_eff must be >= 0");
    if (t < 0) throw std::invalid_argument("ml_voltage: t must be >= 0");
    if (m_eff == 0.0) return params.v_dd;  // no discharge path, line stays high
    if (params.exact_match_mode() && m_eff >= 1.0 && t >= params.t_eval) return 0.0;
    const double tau = params.law.effective_tau(params.word_bits, params.v_eval);
    const double x = m_eff * t / tau;
    switch (params.law.kind) {
        case LawKind::stretched_exponential:
            return params.v_dd * std::exp(-std::pow(x, params.law.beta));
        case LawKind::linear_current:
            return params.v_dd * std::max(0.0, 1.0 - x);
        case LawKind::user_table:
            return params.v_dd * table_lookup(params.law.table, x);
    }
    return params.v_dd;
}

Decision decide(double v_ml, double v_evalth) {
    return v_ml >= v_evalth ? Decision::Match : Decision::Mismatch;
}

unsigned nominal_mt(const MatchlineParams& params, double corner_multiplier) {
    params.validate();
    if (!(corner_multiplier > 0))
        throw std::invalid_argument("nominal_mt: corner multiplier must be > 0");
    const auto matches = [&](unsigned m) {
        return decide(ml_voltage(corner_multiplier * m, params, params.t_eval),
                      params.v_evalth) == Decision::Match;
    };
    if (!matches(1)) return 0;
    unsigned lo = 1, hi = static_cast<unsigned>(params.word_bits);
    if (matches(hi)) return hi;
    // invariant: matches(lo), !matches(hi)
    while (hi - lo > 1) {
        const unsigned mid = lo + (hi - lo) / 2;
        (matches(mid) ? lo : hi) = mid;
    }
    return lo;
}

CalibrationResult calibrate(const std::vector<MtPoint>& points, const MatchlineParams& skeleton) {
    if (points.size() < 2)
        throw std::invalid_argument("calibrate: need at least 2 points");
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end(),
              [](const MtPoint& a, const MtPoint& b) { return a.vth_fraction < b.vth_fraction; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].vth_fraction == sorted[i - 1].vth_fraction)
            throw std::invalid_argument("calibrate: duplicate threshold fraction");
        if (sorted[i].mt >= sorted[i - 1].mt)
            throw std::invalid_argument("calibrate: MT must decrease as v_evalth rises");
    }
    for (const auto& p : sorted) {
        if (!(p.vth_fraction > 0 && p.vth_fraction < 1))
            throw std::invalid_argument("calibrate: threshold fraction must be in (0, 1)");
        if (p.mt == 0) throw std::invalid_argument("calibrate: MT must be positive");
    }

    // ln MT = ln(tau / t_eval) + (1/beta) * ln(ln(1/f)): ordinary least squares.
    const std::size_t n = sorted.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : sorted) {
        const double x = std::log(std::log(1.0 / p.vth_fraction));
        const double y = std::log(static_cast<double>(p.mt));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("calibrate: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    if (!(slope > 0)) throw std::invalid_argument("calibrate: non-physical fit (slope <= 0)");

    CalibrationResult result;
    result.law = skeleton.law;
    result.law.kind = LawKind::stretched_exponential;
    result.law.beta = 1.0 / slope;
    result.law.tau_ref = skeleton.t_eval * std::exp(intercept);
    result.law.v_eval_ref = skeleton.v_eval;
    result.law.cap_ref_bits = skeleton.word_bits;

    result.points = sorted;
    result.max_abs_residual = 0.0;
    result.rel_residuals.reserve(n);
    for (const auto& p : sorted) {
        const double model = (result.law.tau_ref / skeleton.t_eval) *
                             std::pow(std::log(1.0 / p.vth_fraction), 1.0 / result.law.beta);
        const double rr = (model - static_cast<double>(p.mt)) / static_cast<double>(p.mt);
        result.rel_residuals.push_back(rr);
        result.max_abs_residual = std::max(result.max_abs_residual, std::abs(rr));
    }
    return result;
}

const EnergyTable& EnergyTable::builtin() {
    static const EnergyTable table{
        {0.4, 0.5, 0.6},
        {1, 16, 32, 64, 96, 128},
        {{0.406, 0.445, 0.486, 0.566, 0.643, 0.717},
         {0.408, 0.471, 0.530, 0.614, 0.688, 0.762},
         {0.413, 0.507, 0.545, 0.618, 0.692, 0.765}},
    };
    return table;
}

double energy_per_bit(double v_eval, double mismatching_bits, const EnergyTable& table,
                      bool exact_match) {
    if (exact_match) return EnergyTable::exact_match_fj;
    if (v_eval < table.v_evals.front() || v_eval > table.v_evals.back())
        throw out_of_model_error("energy_per_bit: v_eval outside the characterized grid");
    if (mismatching_bits < 0)
        throw std::invalid_argument("energy_per_bit: mismatching_bits must be >= 0");
    const double b = std::clamp(mismatching_bits, table.bits.front(), table.bits.back());

    const auto segment = [](const std::vector<double>& axis, double v) {
        std::size_t i = 0;
        while (i + 2 < axis.size() && v > axis[i + 1]) ++i;
        const double w = (v - axis[i]) / (axis[i + 1] - axis[i]);
        return std::pair<std::size_t, double>{i, w};
    };
    // grid nodes reproduce exactly; w == 0 and w == 1 bypass the arithmetic
    const auto lerp = [](double a, double b, double w) {
        return w == 0.0 ? a : (w == 1.0 ? b : a + w * (b - a));
    };
    const auto [vi, vw] = segment(table.v_evals, v_eval);
    const auto [bi, bw] = segment(table.bits, b);
    const double lo = lerp(table.fj[vi][bi], table.fj[vi][bi + 1], bw);
    const double hi = lerp(table.fj[vi + 1][bi], table.fj[vi + 1][bi + 1], bw);
    return lerp(lo, hi, vw);
}

Throughput throughput(const MatchlineParams& params, std::size_t array_rows,
                      std::size_t word_bits) {
    params.validate();
    // Work in nanoseconds so the common 1 ns + 1 ns cycle divides exactly.
    const double cycle_ns = (params.precharge_time + params.t_eval) * 1e9;
    const double searches = 1e9 / cycle_ns;
    return {searches, searches * static_cast<double>(array_rows) * static_cast<double>(word_bits)};
}

} // namespace hdcam
