#include "hdcam/genomics.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_map>

#include "hdcam/errors.hpp"
#include "hdcam/rng.hpp"

namespace hdcam {

namespace {

constexpr std::uint32_t kDomainRead = 2;

constexpr std::string_view kIupacCodes = "ACGTURYSWKMBDHVN";
constexpr std::string_view kBases = "ACGT";

bool is_acgt(char c) { return c == 'A' || c == 'C' || c == 'G' || c == 'T'; }

int base_index(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return -1;
    }
}

} // namespace

std::vector<Genome> parse_fasta(std::string_view text) {
    std::vector<Genome> genomes;
    Genome current;
    bool in_record = false;
    std::size_t line_no = 0;

    const auto flush = [&]() {
        if (!in_record) return;
        if (current.sequence.empty())
            throw parse_error("FASTA record '" + current.accession + "' has an empty sequence",
                              line_no);
        genomes.push_back(std::move(current));
        current = {};
    };

    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string_view line =
            text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        if (line.front() == '>') {
            flush();
            in_record = true;
            line.remove_prefix(1);
            const std::size_t sp = line.find_first_of(" \t");
            current.accession = std::string(line.substr(0, sp));
            if (sp != std::string_view::npos) {
                std::string_view desc = line.substr(sp + 1);
                const std::size_t first = desc.find_first_not_of(" \t");
                current.description =
                    first == std::string_view::npos ? "" : std::string(desc.substr(first));
            }
            if (current.accession.empty())
                throw parse_error("FASTA header has no identifier", line_no);
            continue;
        }
        if (!in_record)
            throw parse_error("sequence data before the first FASTA header", line_no);
        for (char c : line) {
            const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (kIupacCodes.find(upper) == std::string_view::npos)
                throw parse_error(std::string("illegal sequence character '") + c + "'", line_no);
            current.sequence.push_back(upper);
        }
    }
    flush();
    if (genomes.empty()) throw parse_error("no FASTA records found", line_no);
    return genomes;
}

Encoding Encoding::by_name(const std::string& name) {
    if (name == "onehot4") return {EncodingKind::OneHot4};
    if (name == "gray3") return {EncodingKind::Gray3};
    throw std::invalid_argument("Encoding: unknown name '" + name + "'");
}

unsigned Encoding::base_code(char base) const {
    static constexpr unsigned onehot[4] = {0b0001, 0b0010, 0b0100, 0b1000};
    static constexpr unsigned gray[4] = {0b000, 0b011, 0b110, 0b101};
    const int i = base_index(base);
    if (i < 0) throw std::invalid_argument(std::string("Encoding: ambiguous base '") + base + "'");
    return kind == EncodingKind::OneHot4 ? onehot[i] : gray[i];
}

char Encoding::code_base(unsigned code) const {
    for (char b : kBases)
        if (base_code(b) == code) return b;
    throw std::invalid_argument("Encoding: bit pattern does not decode to a base");
}

BitWord encode(std::string_view bases, const Encoding& encoding) {
    if (bases.empty()) throw std::invalid_argument("encode: empty base string");
    const unsigned bpb = encoding.bits_per_base();
    BitWord word(bases.size() * bpb);
    for (std::size_t i = 0; i < bases.size(); ++i) {
        const unsigned code = encoding.base_code(bases[i]);
        for (unsigned j = 0; j < bpb; ++j)
            if ((code >> j) & 1u) word.set(i * bpb + j, true);
    }
    return word;
}

std::string decode(const BitWord& word, const Encoding& encoding) {
    const unsigned bpb = encoding.bits_per_base();
    if (word.width() % bpb != 0)
        throw std::invalid_argument("decode: width is not a multiple of bits per base");
    std::string out(word.width() / bpb, '?');
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned code = 0;
        for (unsigned j = 0; j < bpb; ++j)
            if (word.get(i * bpb + j)) code |= 1u << j;
        out[i] = encoding.code_base(code);
    }
    return out;
}

KmerList extract_kmers(const Genome& genome, unsigned k, bool dedup) {
    const std::size_t n = genome.length();
    if (k == 0) throw std::invalid_argument("extract_kmers: k must be positive");
    if (k > n) throw std::invalid_argument("extract_kmers: k exceeds genome length");

    KmerList out;
    std::unordered_map<std::string, std::size_t> seen;
    std::size_t bad_in_window = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (!is_acgt(genome.sequence[i])) ++bad_in_window;

    for (std::size_t pos = 0; pos + k <= n; ++pos) {
        if (pos > 0) {
            if (!is_acgt(genome.sequence[pos - 1])) --bad_in_window;
            if (!is_acgt(genome.sequence[pos + k - 1])) ++bad_in_window;
        }
        if (bad_in_window == 0) {
            std::string kmer = genome.sequence.substr(pos, k);
            if (dedup) {
                if (seen.emplace(kmer, pos).second) {
                    out.kmers.push_back(std::move(kmer));
                    out.offsets.push_back(pos);
                }
            } else {
                out.kmers.push_back(std::move(kmer));
                out.offsets.push_back(pos);
            }
        }
    }
    return out;
}

KmerDb build_db(const Genome& genome, unsigned k, const Encoding& encoding, bool dedup) {
    KmerList list = extract_kmers(genome, k, dedup);
    if (list.kmers.empty()) throw std::invalid_argument("build_db: no usable k-mers in genome");

    KmerDb db;
    db.k = k;
    db.encoding = encoding;
    db.source_accession = genome.accession;
    db.deduplicated = dedup;
    db.offsets = std::move(list.offsets);
    db.array = CamArray(static_cast<std::size_t>(k) * encoding.bits_per_base(), list.kmers.size());
    for (std::size_t i = 0; i < list.kmers.size(); ++i)
        db.array.store(i, encode(list.kmers[i], encoding));
    return db;
}

void ReadErrorProfile::validate() const {
    for (double r : {sub_rate, ins_rate, del_rate})
        if (r < 0 || r > 1)
            throw std::invalid_argument("ReadErrorProfile: rates must be in [0, 1]");
    if (sub_rate + ins_rate + del_rate > 1.0)
        throw std::invalid_argument("ReadErrorProfile: rates must sum to at most 1");
}

SimulatedRead simulate_read(const Genome& genome, std::size_t pos, unsigned k,
                            const ReadErrorProfile& profile, std::uint64_t seed,
                            std::uint64_t read_index) {
    profile.validate();
    if (k == 0) throw std::invalid_argument("simulate_read: k must be positive");
    if (pos + k + kReadSlackBases > genome.length())
        throw std::invalid_argument("simulate_read: window exceeds genome end");
    for (std::size_t i = pos; i < pos + k + kReadSlackBases; ++i)
        if (!is_acgt(genome.sequence[i]))
            throw std::invalid_argument("simulate_read: window contains ambiguity characters");

    CounterRng rng(seed, kDomainRead, read_index, 0);
    SimulatedRead read;
    read.position = pos;
    read.bases.reserve(k);
    std::size_t ref = pos;
    while (read.bases.size() < k) {
        if (ref >= genome.length())
            throw std::invalid_argument("simulate_read: deletions ran past the genome end");
        const double u = rng.next_u01();
        if (u < profile.del_rate) {
            ++ref;
            ++read.deletions;
        } else if (u < profile.del_rate + profile.ins_rate) {
            read.bases.push_back(kBases[rng.next_base()]);
            ++read.insertions;
        } else if (u < profile.del_rate + profile.ins_rate + profile.sub_rate) {
            const int orig = base_index(genome.sequence[ref]);
            const int pick = static_cast<int>(rng.next_u64() % 3);
            read.bases.push_back(kBases[(orig + 1 + pick) % 4]);
            ++ref;
            ++read.substitutions;
        } else {
            read.bases.push_back(genome.sequence[ref]);
            ++ref;
        }
    }
    return read;
}

namespace {

BitWord encode_read_checked(const std::string& read, const KmerDb& db) {
    if (read.size() != db.k)
        throw std::invalid_argument("classify_read: read length does not match database k");
    for (char c : read)
        if (!is_acgt(c))
            throw std::invalid_argument("classify_read: read contains ambiguous bases");
    return encode(read, db.encoding);
}

// Retune the sense threshold so the nominal mismatch threshold equals
// target_bits: bisection on v_evalth (nominal_mt is non-increasing in it).
double tune_v_evalth(const MatchlineParams& base, unsigned target_bits) {
    MatchlineParams p = base;
    const auto mt_at = [&](double vth) {
        p.v_evalth = vth;
        return nominal_mt(p);
    };
    double lo = base.v_dd * 1e-9;
    double hi = base.v_dd * (1.0 - 1e-9);
    if (mt_at(lo) < target_bits)
        throw std::invalid_argument(
            "classify_read: threshold not reachable under the configured discharge law");
    for (int iter = 0; iter < 200 && mt_at(lo) != target_bits; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (mt_at(mid) >= target_bits ? lo : hi) = mid;
    }
    if (mt_at(lo) != target_bits)
        throw std::invalid_argument("classify_read: failed to tune v_evalth to threshold");
    return lo;
}

} // namespace

bool classify_read(const std::string& read, const KmerDb& db, unsigned threshold_bp) {
    if (threshold_bp > db.k)
        throw std::invalid_argument("classify_read: threshold exceeds k");
    const BitWord query = encode_read_checked(read, db);
    return min_distance_serial(db.array, query) <= 2 * threshold_bp;
}

bool classify_read(const std::string& read, const KmerDb& db, unsigned threshold_bp,
                   const AnalogMatcher& matcher, std::uint64_t read_index) {
    if (threshold_bp > db.k)
        throw std::invalid_argument("classify_read: threshold exceeds k");
    const BitWord query = encode_read_checked(read, db);

    MatchlineParams params = matcher.params;
    params.word_bits = db.word_bits();
    params.v_evalth = tune_v_evalth(params, 2 * threshold_bp);
    params.validate();

    const std::size_t rows = db.array.row_count();
    for (std::size_t r = 0; r < rows; ++r) {
        const unsigned d = row_distance(db.array, r, query);
        if (sample_trial(params, matcher.spec, d, read_index * rows + r) == Decision::Match)
            return true;
    }
    return false;
}

bool classify_exact(const std::string& read, const KmerDb& db) {
    return classify_read(read, db, 0);
}

ClassificationReport evaluate(const std::vector<LabeledSample>& samples, const KmerDb& db,
                              const std::vector<unsigned>& thresholds_bp,
                              const std::optional<AnalogMatcher>& matcher) {
    if (thresholds_bp.empty())
        throw std::invalid_argument("evaluate: no thresholds given");

    ClassificationReport report;
    report.matcher = matcher ? "analog" : "ideal";
    report.per_threshold.resize(thresholds_bp.size());
    for (std::size_t t = 0; t < thresholds_bp.size(); ++t)
        report.per_threshold[t].threshold_bp = thresholds_bp[t];

    for (const LabeledSample& sample : samples) {
        report.sample_names.push_back(sample.name);
        report.read_count += sample.reads.size();

        if (!matcher) {
            // Ideal oracle: one distance scan per read covers every threshold.
            // Validation and encoding stay serial so bad reads surface as
            // ordinary exceptions, not aborts out of the parallel region.
            const std::size_t n = sample.reads.size();
            std::vector<BitWord> queries;
            queries.reserve(n);
            for (const std::string& read : sample.reads)
                queries.push_back(encode_read_checked(read, db));
            std::vector<unsigned> best_bits(n, 0);
#pragma omp parallel for schedule(dynamic, 16)
            for (long long i = 0; i < static_cast<long long>(n); ++i)
                best_bits[static_cast<std::size_t>(i)] =
                    min_distance_serial(db.array, queries[static_cast<std::size_t>(i)]);
            for (std::size_t t = 0; t < thresholds_bp.size(); ++t) {
                if (thresholds_bp[t] > db.k)
                    throw std::invalid_argument("evaluate: threshold exceeds k");
                ConfusionCounts& c = report.per_threshold[t].counts;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool positive = best_bits[i] <= 2 * thresholds_bp[t];
                    if (sample.expected_positive)
                        positive ? ++c.tp : ++c.fn;
                    else
                        positive ? ++c.fp : ++c.tn;
                }
            }
        } else {
            for (std::size_t t = 0; t < thresholds_bp.size(); ++t) {
                ConfusionCounts& c = report.per_threshold[t].counts;
                for (std::size_t i = 0; i < sample.reads.size(); ++i) {
                    const bool positive =
                        classify_read(sample.reads[i], db, thresholds_bp[t], *matcher, i);
                    if (sample.expected_positive)
                        positive ? ++c.tp : ++c.fn;
                    else
                        positive ? ++c.fp : ++c.tn;
                }
            }
        }
    }

    for (ThresholdMetrics& m : report.per_threshold) {
        if (m.counts.tp + m.counts.fn > 0) m.sensitivity = sensitivity(m.counts);
        if (m.counts.tn + m.counts.fp > 0) m.specificity = specificity(m.counts);
    }
    return report;
}

} // namespace hdcam
