#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdcam/bitword.hpp"
#include "hdcam/variation.hpp"

namespace hdcam {

struct Genome {
    std::string accession;
    std::string description;
    std::string sequence;  // uppercase, ACGT plus IUPAC ambiguity codes

    std::size_t length() const { return sequence.size(); }
};

// Splits on '>' headers, joins wrapped sequence lines, uppercases, keeps
// ambiguity characters for downstream skipping. Rejects data before the
// first header, empty sequences, and non-IUPAC characters (with line
// numbers).
std::vector<Genome> parse_fasta(std::string_view text);

// Per-base bit codes chosen so any two distinct bases differ in exactly two
// bit positions, making encoded Hamming distance exactly twice the basepair
// mismatch count.
enum class EncodingKind : std::uint8_t { OneHot4 = 1, Gray3 = 2 };

struct Encoding {
    EncodingKind kind = EncodingKind::OneHot4;

    unsigned bits_per_base() const { return kind == EncodingKind::OneHot4 ? 4 : 3; }
    const char* name() const { return kind == EncodingKind::OneHot4 ? "onehot4" : "gray3"; }
    static Encoding by_name(const std::string& name);

    // A,C,G,T -> 0001,0010,0100,1000 (one-hot) or 000,011,110,101 (Gray).
    unsigned base_code(char base) const;
    char code_base(unsigned code) const;  // inverse; throws on unknown pattern
};

// Per-base code groups concatenated in sequence order, base 0 in the
// lowest-order group. decode() is the exact inverse.
BitWord encode(std::string_view bases, const Encoding& encoding);
std::string decode(const BitWord& word, const Encoding& encoding);

struct KmerList {
    std::vector<std::string> kmers;
    std::vector<std::uint64_t> offsets;  // first genome offset per k-mer
};

// Sliding window, stride 1; windows containing non-ACGT characters are
// skipped. With dedup the first occurrence wins.
KmerList extract_kmers(const Genome& genome, unsigned k, bool dedup);

// Encoded reference k-mer database: one CAM row per (unique) k-mer.
struct KmerDb {
    unsigned k = 0;
    Encoding encoding;
    CamArray array;
    std::string source_accession;
    bool deduplicated = false;
    std::vector<std::uint64_t> offsets;  // empty when provenance is unknown

    unsigned word_bits() const { return k * encoding.bits_per_base(); }
};

KmerDb build_db(const Genome& genome, unsigned k, const Encoding& encoding, bool dedup);

// Per-base sequencing error probabilities.
struct ReadErrorProfile {
    double sub_rate = 0.036;
    double ins_rate = 0.002;
    double del_rate = 0.002;

    void validate() const;
};

// Extra reference bases a read window may consume beyond k when deletions
// shift it.
inline constexpr std::size_t kReadSlackBases = 8;

struct SimulatedRead {
    std::string bases;  // exactly k basepairs
    std::size_t position;
    unsigned substitutions = 0;
    unsigned insertions = 0;
    unsigned deletions = 0;
};

// Walks the reference from pos emitting bases until k are produced; per
// emitted position a deletion skips a reference base, an insertion emits a
// random base without consuming one, a substitution emits a different base.
// Deterministic per (seed, read_index). The window [pos, pos + k + slack)
// must lie inside the genome and contain no ambiguity characters.
SimulatedRead simulate_read(const Genome& genome, std::size_t pos, unsigned k,
                            const ReadErrorProfile& profile, std::uint64_t seed,
                            std::uint64_t read_index);

// Analog matcher: replaces the ideal row compare with one Monte-Carlo
// matchline draw per row. v_evalth is retuned per requested threshold so the
// nominal mismatch threshold equals the encoded bit threshold.
struct AnalogMatcher {
    MatchlineParams params;
    VariationSpec spec;
};

// Positive iff at least one database row lies within threshold_bp basepair
// mismatches of the read (encoded distance 2 * threshold_bp). The default
// form is the ideal oracle; the AnalogMatcher overload draws per-row
// matchline samples instead.
bool classify_read(const std::string& read, const KmerDb& db, unsigned threshold_bp);
bool classify_read(const std::string& read, const KmerDb& db, unsigned threshold_bp,
                   const AnalogMatcher& matcher, std::uint64_t read_index);

// Exact-search baseline (threshold 0 under the ideal oracle).
bool classify_exact(const std::string& read, const KmerDb& db);

struct LabeledSample {
    std::string name;
    bool expected_positive = true;
    std::vector<std::string> reads;
};

struct ThresholdMetrics {
    unsigned threshold_bp;
    ConfusionCounts counts;
    std::optional<double> sensitivity;  // absent when no expected-positive reads
    std::optional<double> specificity;  // absent when no expected-negative reads
};

struct ClassificationReport {
    std::string matcher;
    std::vector<std::string> sample_names;
    std::uint64_t read_count = 0;
    std::vector<ThresholdMetrics> per_threshold;
};

// Classifies every read at every threshold: expected-positive reads count
// TP/FN, expected-negative reads TN/FP. matcher == nullopt selects the
// ideal oracle.
ClassificationReport evaluate(const std::vector<LabeledSample>& samples, const KmerDb& db,
                              const std::vector<unsigned>& thresholds_bp,
                              const std::optional<AnalogMatcher>& matcher = std::nullopt);

} // namespace hdcam
