// hdcam: command-line front end for the HD-CAM behavioral model.
//
// Subcommands: calibrate, sweep, wordsize, energy, build-db, simulate-reads,
// classify, fetch. Every output is a deterministic function of (config,
// seed, input files); thread count never changes output bytes.
//
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 network error,
// 5 data-format error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"

#ifndef HDCAM_NO_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include "hdcam/dbfile.hpp"
#include "hdcam/errors.hpp"
#include "hdcam/genomics.hpp"
#include "hdcam/matchline.hpp"
#include "hdcam/rng.hpp"
#include "hdcam/variation.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNetwork = 4;
constexpr int kExitFormat = 5;

constexpr std::uint32_t kDomainPosition = 3;

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};
struct network_error : std::runtime_error {
    explicit network_error(const std::string& msg) : std::runtime_error(msg) {}
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Atomic write: temp file then rename, so consumers never see partial data.
void write_file(const std::string& path, const std::string& data) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw io_error("cannot open '" + tmp + "' for writing");
        f.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!f) throw io_error("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw io_error("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

void emit(const std::string& out_path, const std::string& data) {
    if (out_path.empty())
        std::fwrite(data.data(), 1, data.size(), stdout);
    else
        write_file(out_path, data);
}

std::string fmt_fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// "0.60xVDD" (fraction of the supply) or plain volts.
double parse_vth(const std::string& text, double v_dd) {
    std::string s = text;
    std::string lower(s.size(), '\0');
    std::transform(s.begin(), s.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    double scale = 1.0;
    std::string num = s;
    if (lower.size() > 4 && lower.substr(lower.size() - 4) == "xvdd") {
        scale = v_dd;
        num = s.substr(0, s.size() - 4);
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(num, &used);
        if (used != num.size()) throw std::invalid_argument("");
        return v * scale;
    } catch (const std::exception&) {
        throw CLI::ValidationError("v-evalth", "expected volts or '<fraction>xVDD', got '" + text + "'");
    }
}

// Shared matchline-model options.
struct ModelOpts {
    std::size_t word_bits = 256;
    double v_dd = 1.2;
    double v_eval = 0.60;
    std::string v_evalth = "0.60xVDD";
    double t_eval_ns = 1.0;
    double precharge_ns = 1.0;
    std::string law = "stretched";
    double tau_ref_ns = hdcam::DischargeLaw{}.tau_ref * 1e9;
    double beta = hdcam::DischargeLaw{}.beta;
    double v_eval_ref = 0.60;
    double slope_s = 0.12;
    std::size_t cap_ref_bits = 256;

    void attach(CLI::App* cmd) {
        cmd->add_option("--word-bits", word_bits, "CAM word width in bits")
            ->capture_default_str();
        cmd->add_option("--v-dd", v_dd, "supply voltage, volts")->capture_default_str();
        cmd->add_option("--v-eval", v_eval, "evaluation gate drive, volts")
            ->capture_default_str();
        cmd->add_option("--v-evalth", v_evalth,
                        "sense threshold: volts or fraction like 0.60xVDD")
            ->capture_default_str();
        cmd->add_option("--t-eval-ns", t_eval_ns, "evaluation time, ns")->capture_default_str();
        cmd->add_option("--precharge-ns", precharge_ns, "precharge time, ns")
            ->capture_default_str();
        cmd->add_option("--law", law, "discharge law: stretched | linear")
            ->check(CLI::IsMember({"stretched", "linear"}))
            ->capture_default_str();
        cmd->add_option("--tau-ref-ns", tau_ref_ns, "discharge time constant at the anchor, ns")
            ->capture_default_str();
        cmd->add_option("--beta", beta, "stretched-exponential shape exponent")
            ->capture_default_str();
        cmd->add_option("--v-eval-ref", v_eval_ref, "calibration anchor gate drive, volts")
            ->capture_default_str();
        cmd->add_option("--slope-s", slope_s, "tau sensitivity to v_eval, volts")
            ->capture_default_str();
        cmd->add_option("--cap-ref-bits", cap_ref_bits, "word width tau_ref was calibrated at")
            ->capture_default_str();
    }

    hdcam::MatchlineParams params() const {
        hdcam::MatchlineParams p;
        p.v_dd = v_dd;
        p.v_eval = v_eval;
        p.v_evalth = parse_vth(v_evalth, v_dd);
        p.t_eval = t_eval_ns * 1e-9;
        p.precharge_time = precharge_ns * 1e-9;
        p.word_bits = word_bits;
        p.law.kind = law == "linear" ? hdcam::LawKind::linear_current
                                     : hdcam::LawKind::stretched_exponential;
        p.law.tau_ref = tau_ref_ns * 1e-9;
        p.law.beta = beta;
        p.law.v_eval_ref = v_eval_ref;
        p.law.slope_s = slope_s;
        p.law.cap_ref_bits = cap_ref_bits;
        p.validate();
        return p;
    }
};

// Shared Monte-Carlo options.
struct VariationOpts {
    std::string corner = "TT";
    double corner_multiplier = 0.0;  // 0 = use the named corner's default
    double sigma_g = 0.1;
    double sigma_t_ps = 0.0;
    unsigned trials = 1000;
    std::uint64_t seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--corner", corner, "process corner: TT | FF | SS")
            ->check(CLI::IsMember({"TT", "FF", "SS"}))
            ->capture_default_str();
        cmd->add_option("--corner-multiplier", corner_multiplier,
                        "override the corner conductance multiplier")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--sigma-g", sigma_g, "stddev of log per-cell conductance")
            ->capture_default_str();
        cmd->add_option("--sigma-t-ps", sigma_t_ps, "t_eval jitter stddev, ps")
            ->capture_default_str();
        cmd->add_option("--trials", trials, "Monte-Carlo trials per distance")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    }

    hdcam::VariationSpec spec() const {
        hdcam::VariationSpec s;
        s.corner = hdcam::Corner::by_name(corner);
        if (corner_multiplier > 0) s.corner.conductance_multiplier = corner_multiplier;
        s.sigma_g = sigma_g;
        s.sigma_t = sigma_t_ps * 1e-12;
        s.trials = trials;
        s.seed = seed;
        s.validate();
        return s;
    }
};

void apply_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat key=value file with '#' comments; each key maps to a long option of
// the active subcommand. Returned as '--key=value' tokens that are injected
// ahead of the explicit command-line flags, so flags win per key.
std::vector<std::string> load_config_args(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    std::size_t line_no = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(f, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0)
            throw config_error("config '" + path + "' line " + std::to_string(line_no) +
                               ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\'')))
            value = value.substr(1, value.size() - 2);
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

// Registers --config and makes repeated scalar options last-one-wins so the
// injected config tokens yield to explicit flags. Call after every option
// of the subcommand is attached.
std::string g_config_path;
void attach_config(CLI::App* cmd) {
    cmd->add_option("--config", g_config_path,
                    "flat key=value config file; command-line flags take precedence");
    for (CLI::Option* opt : cmd->get_options()) {
        if (opt->get_expected_max() == 1 && opt->get_type_size_max() == 1)
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
}

// Builds the final token stream: config-file tokens (if any) spliced in
// right after the subcommand name.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::size_t sub_index = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            sub_index = i;
            break;
        }
    }
    std::string config_path;
    for (std::size_t i = sub_index; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
        const auto tokens = load_config_args(config_path);
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_index) + 1, tokens.begin(),
                    tokens.end());
    }
    return args;
}

bool is_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

// Cells are pre-formatted tokens; JSON re-emits them verbatim as numbers
// (missing values become null), so both formats stay byte-deterministic.
std::string render(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows, bool json) {
    std::string out;
    if (json) {
        out += "[\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            out += "  {";
            for (std::size_t i = 0; i < header.size(); ++i) {
                out += "\"" + header[i] + "\": ";
                const std::string& cell = rows[r][i];
                if (cell.empty() || cell == "NA")
                    out += "null";
                else if (is_numeric(cell))
                    out += cell;
                else
                    out += ordered_json(cell).dump();
                if (i + 1 < header.size()) out += ", ";
            }
            out += r + 1 < rows.size() ? "},\n" : "}\n";
        }
        out += "]\n";
        return out;
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out += header[i];
        out += (i + 1 < header.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

// ---------------------------------------------------------------- calibrate

// Fig.-style mismatch-threshold table: fraction of VDD -> MT.
const std::vector<hdcam::MtPoint>& builtin_mt_table() {
    static const std::vector<hdcam::MtPoint> table = {
        {0.90, 13}, {0.85, 18}, {0.80, 24}, {0.75, 30}, {0.70, 37}, {0.65, 43},
        {0.60, 49}, {0.55, 56}, {0.50, 63}, {0.45, 70}, {0.40, 78}, {0.35, 86},
        {0.30, 95}, {0.25, 108}, {0.20, 127}, {0.15, 155},
    };
    return table;
}

std::vector<hdcam::MtPoint> parse_mt_table(const std::string& text) {
    std::vector<hdcam::MtPoint> points;
    std::istringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double frac;
        unsigned mt;
        if (!(ls >> frac)) continue;  // blank or comment-only line
        if (!(ls >> mt))
            throw hdcam::parse_error("expected '<fraction> <mt>'", line_no);
        points.push_back({frac, mt});
    }
    return points;
}

int cmd_calibrate(const std::string& table_path, const ModelOpts& model,
                  const std::string& out_path, bool json) {
    const auto points = table_path.empty() ? builtin_mt_table()
                                           : parse_mt_table(read_file(table_path));
    const auto skeleton = model.params();
    const auto fit = hdcam::calibrate(points, skeleton);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fit.points.size(); ++i) {
        hdcam::MatchlineParams p = skeleton;
        p.law = fit.law;
        p.v_evalth = fit.points[i].vth_fraction * skeleton.v_dd;
        const double model_mt = (fit.law.tau_ref / skeleton.t_eval) *
                                std::pow(std::log(1.0 / fit.points[i].vth_fraction),
                                         1.0 / fit.law.beta);
        rows.push_back({fmt_g(fit.points[i].vth_fraction),
                        std::to_string(fit.points[i].mt), fmt_g(model_mt),
                        std::to_string(hdcam::nominal_mt(p)), fmt_fixed(fit.rel_residuals[i]),
                        fmt_g(fit.law.tau_ref * 1e9), fmt_g(fit.law.beta)});
    }
    emit(out_path, render({"vth_fraction", "mt_given", "mt_model", "mt_nominal",
                           "rel_residual", "tau_ref_ns", "beta"},
                          rows, json));
    return 0;
}

// -------------------------------------------------------------------- sweep

int cmd_sweep(const ModelOpts& model, const VariationOpts& var, unsigned d_min, unsigned d_max,
              const std::string& out_path, bool json) {
    const auto params = model.params();
    const auto spec = var.spec();
    const auto curve = hdcam::match_probability_curve(params, spec, d_min, d_max);
    const unsigned mt = hdcam::nominal_mt(params, spec.corner.conductance_multiplier);
    const auto metrics = hdcam::sens_spec_vs_hd(curve, mt);

    std::string k_bound, l_bound;
    try {
        const auto region = hdcam::uncertainty_region(curve);
        k_bound = std::to_string(region.k_bound);
        l_bound = std::to_string(region.l_bound);
    } catch (const hdcam::region_unbounded_error&) {
        // scanned range covers neither plateau edge; leave the bounds empty
    }

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        const auto& m = metrics[i];
        rows.push_back({std::to_string(m.d), fmt_fixed(curve.probability(m.d)),
                        m.expected_match ? "sensitivity" : "specificity", fmt_fixed(m.value),
                        k_bound, l_bound});
    }
    emit(out_path, render({"d", "match_probability", "metric", "metric_value",
                           "k_bound", "l_bound"},
                          rows, json));
    return 0;
}

// ----------------------------------------------------------------- wordsize

int cmd_wordsize(const ModelOpts& model, const std::vector<std::size_t>& widths,
                 const std::string& out_path, bool json) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t w : widths) {
        if (w == 0 || w % 8 != 0)
            throw CLI::ValidationError("wordsize", "width " + std::to_string(w) +
                                                       " is not a positive multiple of 8");
        ModelOpts m = model;
        m.word_bits = w;
        rows.push_back({std::to_string(w), std::to_string(hdcam::nominal_mt(m.params()))});
    }
    emit(out_path, render({"word_bits", "nominal_mt"}, rows, json));
    return 0;
}

// ------------------------------------------------------------------- energy

int cmd_energy(double v_eval, double v_dd, bool exact, const std::vector<double>& bits,
               const std::string& out_path, bool json) {
    const bool exact_mode = exact || v_eval >= v_dd - 1e-3;
    std::vector<std::vector<std::string>> rows;
    for (double b : bits) {
        const double fj =
            hdcam::energy_per_bit(v_eval, b, hdcam::EnergyTable::builtin(), exact_mode);
        rows.push_back({fmt_g(v_eval), fmt_g(b), fmt_g(fj)});
    }
    emit(out_path, render({"v_eval", "mismatching_bits", "energy_fj_per_bit"}, rows, json));
    return 0;
}

// ----------------------------------------------------------------- build-db

hdcam::Genome pick_record(const std::vector<hdcam::Genome>& genomes, const std::string& record) {
    if (record.empty()) return genomes.front();
    for (const auto& g : genomes)
        if (g.accession == record) return g;
    throw hdcam::db_format_error("no FASTA record with accession '" + record + "'");
}

int cmd_build_db(const std::string& fasta_path, unsigned k, const std::string& encoding,
                 bool dedup, const std::string& record, const std::string& out_path) {
    const auto genomes = hdcam::parse_fasta(read_file(fasta_path));
    const auto genome = pick_record(genomes, record);
    const auto db = hdcam::build_db(genome, k, hdcam::Encoding::by_name(encoding), dedup);
    hdcam::write_db(out_path, db);
    std::fprintf(stderr, "build-db: %zu rows of %u bits from '%s'\n", db.array.row_count(),
                 db.word_bits(), genome.accession.c_str());
    return 0;
}

// ----------------------------------------------------------- simulate-reads

int cmd_simulate_reads(const std::string& fasta_path, const std::string& record, unsigned count,
                       unsigned k, double sub_rate, double ins_rate, double del_rate,
                       std::uint64_t seed, const std::string& out_path) {
    const auto genomes = hdcam::parse_fasta(read_file(fasta_path));
    const auto genome = pick_record(genomes, record);
    if (genome.length() < k + hdcam::kReadSlackBases)
        throw CLI::ValidationError("simulate-reads", "genome shorter than k plus slack");
    const hdcam::ReadErrorProfile profile{sub_rate, ins_rate, del_rate};
    profile.validate();

    const std::size_t max_pos = genome.length() - k - hdcam::kReadSlackBases;
    std::string out;
    for (unsigned i = 0; i < count; ++i) {
        // Deterministic position stream; re-draw until the window is clean.
        std::size_t pos = 0;
        bool ok = false;
        for (std::uint32_t attempt = 0; attempt < 1000 && !ok; ++attempt) {
            hdcam::CounterRng rng(seed, kDomainPosition, i, attempt);
            pos = static_cast<std::size_t>(rng.next_u64() % (max_pos + 1));
            ok = true;
            for (std::size_t j = pos; j < pos + k + hdcam::kReadSlackBases && ok; ++j) {
                const char c = genome.sequence[j];
                ok = c == 'A' || c == 'C' || c == 'G' || c == 'T';
            }
        }
        if (!ok)
            throw hdcam::db_format_error(
                "simulate-reads: could not find an unambiguous window; too many ambiguity "
                "characters in the reference");
        const auto read = hdcam::simulate_read(genome, pos, k, profile, seed, i);
        out += ">r" + std::to_string(i) + " pos=" + std::to_string(read.position) +
               " sub=" + std::to_string(read.substitutions) +
               " ins=" + std::to_string(read.insertions) +
               " del=" + std::to_string(read.deletions) + "\n";
        out += read.bases;
        out += '\n';
    }
    emit(out_path, out);
    return 0;
}

// ----------------------------------------------------------------- classify

int cmd_classify(const std::string& db_path, const std::vector<std::string>& positive,
                 const std::vector<std::string>& negative, std::vector<unsigned> thresholds,
                 const std::string& matcher, const ModelOpts& model, const VariationOpts& var,
                 const std::string& out_path, bool json) {
    const auto db = hdcam::read_db(db_path);

    std::vector<hdcam::LabeledSample> samples;
    const auto load = [&](const std::string& path, bool positive_label) {
        hdcam::LabeledSample sample;
        sample.name = path;
        sample.expected_positive = positive_label;
        for (auto& g : hdcam::parse_fasta(read_file(path)))
            sample.reads.push_back(std::move(g.sequence));
        samples.push_back(std::move(sample));
    };
    for (const auto& p : positive) load(p, true);
    for (const auto& p : negative) load(p, false);
    if (samples.empty())
        throw CLI::ValidationError("classify", "at least one --positive or --negative sample");

    std::optional<hdcam::AnalogMatcher> analog;
    if (matcher == "analog") analog = hdcam::AnalogMatcher{model.params(), var.spec()};

    const auto report = hdcam::evaluate(samples, db, thresholds, analog);

    std::vector<std::vector<std::string>> rows;
    for (const auto& m : report.per_threshold) {
        rows.push_back({std::to_string(m.threshold_bp), std::to_string(m.counts.tp),
                        std::to_string(m.counts.fn), std::to_string(m.counts.tn),
                        std::to_string(m.counts.fp),
                        m.sensitivity ? fmt_fixed(*m.sensitivity) : "NA",
                        m.specificity ? fmt_fixed(*m.specificity) : "NA"});
    }
    emit(out_path,
         render({"threshold_bp", "tp", "fn", "tn", "fp", "sensitivity", "specificity"}, rows,
                json));
    return 0;
}

// -------------------------------------------------------------------- fetch

int cmd_fetch(const std::string& accession, const std::string& base_url,
              const std::string& out_path, int retries, int delay_ms) {
    const std::string path = "/entrez/eutils/efetch.fcgi?db=nuccore&id=" + accession +
                             "&rettype=fasta&retmode=text";
    std::string body;
    std::string last_error;
    bool got = false;
    for (int attempt = 0; attempt <= retries && !got; ++attempt) {
        if (delay_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        httplib::Client client(base_url);
        client.set_follow_location(true);
        auto res = client.Get(path);
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        body = res->body;
        got = true;
    }
    if (!got) throw network_error("fetch '" + accession + "' failed: " + last_error);
    if (body.empty()) throw io_error("fetch '" + accession + "': server returned an empty body");
    if (body.front() != '>')
        throw hdcam::parse_error("fetch payload is not FASTA (missing '>' header)", 1);
    write_file(out_path, body);
    std::fprintf(stderr, "fetch: wrote %zu bytes to '%s'\n", body.size(), out_path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HD-CAM behavioral simulator: matchline model, Monte-Carlo variation "
                 "studies, and k-mer DNA classification",
                 "hdcam"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 success, 2 config error, 3 I/O error, 4 network error, "
               "5 data-format error");

    std::string out_path;
    std::string format = "csv";
    int threads = 0;

    const auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    int rc = 0;

    // calibrate
    auto* cal = app.add_subcommand(
        "calibrate", "fit the discharge law to a mismatch-threshold vs V_evalth table");
    std::string cal_table;
    ModelOpts cal_model;
    cal->add_option("--table", cal_table,
                    "CSV/whitespace table of '<fraction of VDD>,<MT>' (default: built-in "
                    "256-bit reference table)");
    cal_model.attach(cal);
    add_output(cal);
    attach_config(cal);
    cal->callback([&] { rc = cmd_calibrate(cal_table, cal_model, out_path, format == "json"); });

    // sweep
    auto* sw = app.add_subcommand(
        "sweep",
        "Monte-Carlo match-probability curve over a Hamming-distance range. Columns: d, "
        "match_probability, metric (sensitivity for d <= nominal MT, specificity above), "
        "metric_value, k_bound (largest d always matching), l_bound (smallest d never "
        "matching); bounds are empty when the sweep range does not reach the plateau");
    ModelOpts sw_model;
    VariationOpts sw_var;
    unsigned sw_dmin = 0, sw_dmax = 0;
    bool sw_dmax_set = false;
    sw_model.attach(sw);
    sw_var.attach(sw);
    sw->add_option("--d-min", sw_dmin, "lowest Hamming distance")->capture_default_str();
    sw->add_option("--d-max", sw_dmax, "highest Hamming distance (default: word width)")
        ->each([&](const std::string&) { sw_dmax_set = true; });
    sw->add_option("--threads", threads, "OpenMP worker count (0 = default)");
    add_output(sw);
    attach_config(sw);
    sw->callback([&] {
        apply_threads(threads);
        const unsigned dmax = sw_dmax_set ? sw_dmax : static_cast<unsigned>(sw_model.word_bits);
        rc = cmd_sweep(sw_model, sw_var, sw_dmin, dmax, out_path, format == "json");
    });

    // wordsize
    auto* ws = app.add_subcommand("wordsize", "nominal mismatch threshold per word width");
    ModelOpts ws_model;
    std::vector<std::size_t> ws_widths = {128, 256, 512};
    ws_model.attach(ws);
    ws->add_option("--widths", ws_widths, "word widths to evaluate")->delimiter(',')
        ->capture_default_str();
    add_output(ws);
    attach_config(ws);
    ws->callback([&] { rc = cmd_wordsize(ws_model, ws_widths, out_path, format == "json"); });

    // energy
    auto* en = app.add_subcommand("energy", "energy per bit per search from the built-in table");
    double en_veval = 0.4, en_vdd = 1.2;
    bool en_exact = false;
    std::vector<double> en_bits = {1, 16, 32, 64, 96, 128};
    en->add_option("--v-eval", en_veval, "evaluation gate drive, volts")->capture_default_str();
    en->add_option("--v-dd", en_vdd, "supply voltage, volts")->capture_default_str();
    en->add_flag("--exact", en_exact, "exact-match mode (flat per-search energy)");
    en->add_option("--bits", en_bits, "mismatching-bit counts")->delimiter(',')
        ->capture_default_str();
    add_output(en);
    attach_config(en);
    en->callback([&] {
        rc = cmd_energy(en_veval, en_vdd, en_exact, en_bits, out_path, format == "json");
    });

    // build-db
    auto* bd = app.add_subcommand("build-db", "build a k-mer database from a FASTA reference");
    std::string bd_fasta, bd_record, bd_encoding = "onehot4", bd_out;
    unsigned bd_k = 64;
    bool bd_dedup = true;
    bd->add_option("--fasta", bd_fasta, "reference FASTA file")->required();
    bd->add_option("--record", bd_record, "accession of the record to index (default: first)");
    bd->add_option("--k", bd_k, "k-mer length in basepairs")->capture_default_str();
    bd->add_option("--encoding", bd_encoding, "base encoding")
        ->check(CLI::IsMember({"onehot4", "gray3"}))
        ->capture_default_str();
    bd->add_flag("--dedup,!--no-dedup", bd_dedup, "store each distinct k-mer once")
        ->capture_default_str();
    bd->add_option("--out", bd_out, "output database file")->required();
    attach_config(bd);
    bd->callback([&] {
        rc = cmd_build_db(bd_fasta, bd_k, bd_encoding, bd_dedup, bd_record, bd_out);
    });

    // simulate-reads
    auto* sr = app.add_subcommand("simulate-reads",
                                  "draw reads from a reference and inject sequencing errors");
    std::string sr_fasta, sr_record, sr_out;
    unsigned sr_count = 1000, sr_k = 64;
    double sr_sub = 0.036, sr_ins = 0.002, sr_del = 0.002;
    std::uint64_t sr_seed = 0;
    sr->add_option("--fasta", sr_fasta, "reference FASTA file")->required();
    sr->add_option("--record", sr_record, "accession of the source record (default: first)");
    sr->add_option("--count", sr_count, "number of reads")->capture_default_str();
    sr->add_option("--k", sr_k, "read length in basepairs")->capture_default_str();
    sr->add_option("--sub-rate", sr_sub, "substitution probability per base")
        ->capture_default_str();
    sr->add_option("--ins-rate", sr_ins, "insertion probability per base")
        ->capture_default_str();
    sr->add_option("--del-rate", sr_del, "deletion probability per base")
        ->capture_default_str();
    sr->add_option("--seed", sr_seed, "RNG seed")->capture_default_str();
    sr->add_option("--out", sr_out, "output reads FASTA")->required();
    attach_config(sr);
    sr->callback([&] {
        rc = cmd_simulate_reads(sr_fasta, sr_record, sr_count, sr_k, sr_sub, sr_ins, sr_del,
                                sr_seed, sr_out);
    });

    // classify
    auto* cl = app.add_subcommand(
        "classify", "classify labeled read samples against a k-mer database");
    std::string cl_db, cl_matcher = "ideal";
    std::vector<std::string> cl_pos, cl_neg;
    std::vector<unsigned> cl_thresholds = {0, 2, 4, 8, 12, 16};
    ModelOpts cl_model;
    VariationOpts cl_var;
    cl->add_option("--db", cl_db, "database file from build-db")->required();
    cl->add_option("--positive", cl_pos, "FASTA of expected-positive reads (repeatable)");
    cl->add_option("--negative", cl_neg, "FASTA of expected-negative reads (repeatable)");
    cl->add_option("--thresholds", cl_thresholds, "mismatch thresholds in basepairs")
        ->delimiter(',')
        ->capture_default_str();
    cl->add_option("--matcher", cl_matcher, "row matcher")
        ->check(CLI::IsMember({"ideal", "analog"}))
        ->capture_default_str();
    cl_model.attach(cl);
    cl_var.attach(cl);
    cl->add_option("--threads", threads, "OpenMP worker count (0 = default)");
    add_output(cl);
    attach_config(cl);
    cl->callback([&] {
        apply_threads(threads);
        rc = cmd_classify(cl_db, cl_pos, cl_neg, cl_thresholds, cl_matcher, cl_model, cl_var,
                          out_path, format == "json");
    });

    // fetch
    auto* ft = app.add_subcommand("fetch", "download a FASTA record via NCBI efetch");
    std::string ft_acc, ft_out;
    std::string ft_base = "https://eutils.ncbi.nlm.nih.gov";
    int ft_retries = 0, ft_delay = 0;
    ft->add_option("--accession", ft_acc, "nuccore accession")->required();
    ft->add_option("--base-url", ft_base, "service base URL")
        ->envname("HDCAM_BASE_URL")
        ->capture_default_str();
    ft->add_option("--retries", ft_retries, "extra attempts after a failure")
        ->capture_default_str();
    ft->add_option("--delay-ms", ft_delay, "courtesy delay before each request, ms")
        ->capture_default_str();
    ft->add_option("--out", ft_out, "output FASTA file")->required();
    attach_config(ft);
    ft->callback([&] { rc = cmd_fetch(ft_acc, ft_base, ft_out, ft_retries, ft_delay); });

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hdcam::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const hdcam::db_format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFormat;
    } catch (const network_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNetwork;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const hdcam::out_of_model_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return rc;
}
