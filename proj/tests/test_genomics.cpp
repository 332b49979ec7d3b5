#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "hdcam/errors.hpp"
#include "hdcam/genomics.hpp"
#include "hdcam/rng.hpp"

using namespace hdcam;

namespace {

std::string random_bases(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    static constexpr char bases[] = "ACGT";
    std::string s(n, 'A');
    CounterRng rng(seed, 88, stream, 0);
    for (auto& c : s) c = bases[rng.next_base()];
    return s;
}

unsigned bp_mismatches(std::string_view a, std::string_view b) {
    unsigned d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

// Brute-force reference classifier: best basepair-mismatch count over the
// decoded k-mer strings, no encoding involved.
unsigned best_bp_mismatches(const std::string& read, const std::vector<std::string>& kmers) {
    unsigned best = static_cast<unsigned>(read.size());
    for (const auto& kmer : kmers) best = std::min(best, bp_mismatches(read, kmer));
    return best;
}

} // namespace

TEST_CASE("parse_fasta basics") {
    const auto one = parse_fasta(">x desc text\nACGT\nacgt\n");
    REQUIRE(one.size() == 1);
    CHECK(one[0].accession == "x");
    CHECK(one[0].description == "desc text");
    CHECK(one[0].sequence == "ACGTACGT");

    const auto two = parse_fasta(">a\nAC\n>b\nGT\n");
    REQUIRE(two.size() == 2);
    CHECK(two[0].accession == "a");
    CHECK(two[1].accession == "b");

    const auto amb = parse_fasta(">n\nACNT\n");
    CHECK(amb[0].sequence == "ACNT");  // ambiguity marks survive parsing
}

TEST_CASE("parse_fasta error paths carry line numbers") {
    CHECK_THROWS_AS(parse_fasta("ACGT\n"), parse_error);
    CHECK_THROWS_AS(parse_fasta(">x\n"), parse_error);
    CHECK_THROWS_AS(parse_fasta(">x\nAC!T\n"), parse_error);
    CHECK_THROWS_AS(parse_fasta(""), parse_error);
    try {
        parse_fasta(">x\nACGT\nAC1T\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("base encodings match the published code tables") {
    const Encoding onehot{EncodingKind::OneHot4};
    const Encoding gray{EncodingKind::Gray3};

    const BitWord a = encode("A", onehot);
    REQUIRE(a.width() == 4);
    CHECK(a.get(0));
    CHECK_FALSE(a.get(1));
    CHECK_FALSE(a.get(2));
    CHECK_FALSE(a.get(3));

    const BitWord w = encode("ACGT", gray);
    REQUIRE(w.width() == 12);
    // A=000 C=011 G=110 T=101, base 0 in the lowest group
    const std::vector<std::size_t> set_bits = {3, 4, 7, 8, 9, 11};
    for (std::size_t bit = 0; bit < 12; ++bit)
        CHECK(w.get(bit) == (std::find(set_bits.begin(), set_bits.end(), bit) != set_bits.end()));
}

TEST_CASE("every distinct base pair is exactly two bits apart") {
    for (const auto kind : {EncodingKind::OneHot4, EncodingKind::Gray3}) {
        const Encoding enc{kind};
        for (char x : {'A', 'C', 'G', 'T'})
            for (char y : {'A', 'C', 'G', 'T'}) {
                const unsigned d =
                    hamming_distance(encode({&x, 1}, enc), encode({&y, 1}, enc));
                CHECK(d == (x == y ? 0u : 2u));
            }
    }
}

TEST_CASE("encoded distance is twice the basepair mismatch count") {
    for (const auto kind : {EncodingKind::OneHot4, EncodingKind::Gray3}) {
        const Encoding enc{kind};
        for (std::uint64_t s = 0; s < 25; ++s) {
            const std::string x = random_bases(64, 101, 2 * s);
            const std::string y = random_bases(64, 101, 2 * s + 1);
            CHECK(hamming_distance(encode(x, enc), encode(y, enc)) ==
                  2 * bp_mismatches(x, y));
        }
    }
}

TEST_CASE("encode/decode round-trip") {
    for (const auto kind : {EncodingKind::OneHot4, EncodingKind::Gray3}) {
        const Encoding enc{kind};
        for (std::uint64_t s = 0; s < 10; ++s) {
            const std::string bases = random_bases(33, 103, s);
            CHECK(decode(encode(bases, enc), enc) == bases);
        }
    }
    CHECK_THROWS_AS(encode("ACNT", Encoding{}), std::invalid_argument);
}

TEST_CASE("extract_kmers slides, skips ambiguity and dedups") {
    const Genome g{"t", "", "ACGTACGT"};
    CHECK(extract_kmers(g, 4, false).kmers.size() == 5);
    const auto dedup = extract_kmers(g, 4, true);
    CHECK(dedup.kmers.size() == 4);
    CHECK(dedup.kmers[0] == "ACGT");
    CHECK(dedup.offsets[0] == 0);  // first occurrence wins

    const Genome amb{"n", "", "ACNT"};
    const auto ks = extract_kmers(amb, 2, false);
    REQUIRE(ks.kmers.size() == 1);
    CHECK(ks.kmers[0] == "AC");

    CHECK_THROWS_AS(extract_kmers(g, 9, false), std::invalid_argument);
}

TEST_CASE("build_db encodes rows that decode back to their k-mers") {
    const Genome g{"toy", "", "ACGTACGT"};
    const auto db = build_db(g, 4, Encoding{EncodingKind::OneHot4}, true);
    CHECK(db.array.row_count() == 4);
    CHECK(db.array.width() == 16);
    CHECK(db.source_accession == "toy");
    for (std::size_t i = 0; i < db.array.row_count(); ++i) {
        const std::string kmer = decode(db.array.row_word(i), db.encoding);
        CHECK(kmer == g.sequence.substr(db.offsets[i], 4));
    }
    CHECK_THROWS_AS(build_db(Genome{"n", "", "NNNNNN"}, 4, Encoding{}, true),
                    std::invalid_argument);
}

TEST_CASE("simulate_read with zero rates copies the reference") {
    const Genome g{"r", "", random_bases(200, 107)};
    const ReadErrorProfile quiet{0, 0, 0};
    const auto read = simulate_read(g, 17, 64, quiet, 1, 0);
    CHECK(read.bases == g.sequence.substr(17, 64));
    CHECK(read.substitutions == 0);
    CHECK(read.insertions == 0);
    CHECK(read.deletions == 0);
}

TEST_CASE("simulate_read with substitution rate one flips every base") {
    const Genome g{"r", "", random_bases(200, 109)};
    const ReadErrorProfile all_subs{1.0, 0, 0};
    const auto read = simulate_read(g, 5, 64, all_subs, 2, 0);
    CHECK(read.substitutions == 64);
    for (unsigned i = 0; i < 64; ++i) CHECK(read.bases[i] != g.sequence[5 + i]);
}

TEST_CASE("simulate_read is deterministic and respects bounds") {
    const Genome g{"r", "", random_bases(300, 111)};
    const ReadErrorProfile profile{};
    const auto a = simulate_read(g, 10, 64, profile, 77, 5);
    const auto b = simulate_read(g, 10, 64, profile, 77, 5);
    CHECK(a.bases == b.bases);
    const auto c = simulate_read(g, 10, 64, profile, 77, 6);
    CHECK(a.bases != c.bases);  // different read index, different stream

    CHECK_THROWS_AS(simulate_read(g, 300 - 64, 64, profile, 1, 0), std::invalid_argument);
    const Genome amb{"n", "", "ACGTN" + random_bases(100, 113)};
    CHECK_THROWS_AS(simulate_read(amb, 0, 64, ReadErrorProfile{}, 1, 0),
                    std::invalid_argument);
}

TEST_CASE("mean substitution count matches the per-base rate") {
    const Genome g{"r", "", random_bases(2000, 115)};
    const ReadErrorProfile profile{};  // defaults 0.036 / 0.002 / 0.002
    std::uint64_t subs = 0;
    const unsigned reads = 10000;
    for (unsigned i = 0; i < reads; ++i) {
        const std::size_t pos = (i * 97) % (2000 - 64 - kReadSlackBases);
        subs += simulate_read(g, pos, 64, profile, 1234, i).substitutions;
    }
    const double mean = static_cast<double>(subs) / reads;
    CHECK(mean == doctest::Approx(64 * 0.036).epsilon(0.1 / 2.304));
}

TEST_CASE("classify_read ideal oracle basics") {
    const Genome g{"toy", "", random_bases(400, 117)};
    const auto db = build_db(g, 64, Encoding{EncodingKind::OneHot4}, true);

    const std::string stored = g.sequence.substr(100, 64);
    CHECK(classify_read(stored, db, 0));

    std::string five_subs = stored;
    for (unsigned i = 0; i < 5; ++i) {
        const char c = five_subs[i * 11];
        five_subs[i * 11] = c == 'A' ? 'C' : 'A';
    }
    REQUIRE(bp_mismatches(five_subs, stored) == 5);
    CHECK(classify_read(five_subs, db, 5));

    CHECK_THROWS_AS(classify_read("ACGT", db, 0), std::invalid_argument);
    CHECK_THROWS_AS(classify_read(std::string(63, 'A') + "N", db, 0), std::invalid_argument);
    CHECK_THROWS_AS(classify_read(stored, db, 65), std::invalid_argument);
}

TEST_CASE("ideal classification equals the string-level brute force exhaustively") {
    const Genome g{"toy", "", random_bases(300, 119)};
    const auto db = build_db(g, 16, Encoding{EncodingKind::OneHot4}, true);
    const auto kmers = extract_kmers(g, 16, true).kmers;

    std::vector<std::string> reads;
    for (std::uint64_t i = 0; i < 20; ++i)
        reads.push_back(
            simulate_read(g, (i * 13) % 200, 16, ReadErrorProfile{0.15, 0.02, 0.02}, 9, i)
                .bases);
    for (std::uint64_t i = 0; i < 5; ++i) reads.push_back(random_bases(16, 121, i));

    for (const auto& read : reads) {
        const unsigned best = best_bp_mismatches(read, kmers);
        for (unsigned thr = 0; thr <= 16; ++thr)
            CHECK(classify_read(read, db, thr) == (best <= thr));
    }
}

TEST_CASE("positive classifications are monotone in the threshold") {
    const Genome g{"toy", "", random_bases(500, 123)};
    const auto db = build_db(g, 32, Encoding{EncodingKind::OneHot4}, true);
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto read =
            simulate_read(g, (i * 7) % 400, 32, ReadErrorProfile{0.08, 0.01, 0.01}, 31, i);
        bool prev = classify_read(read.bases, db, 0);
        for (unsigned thr = 1; thr <= 32; ++thr) {
            const bool cur = classify_read(read.bases, db, thr);
            CHECK((!prev || cur));  // once positive, stays positive
            prev = cur;
        }
    }
}

TEST_CASE("single deletion is bounded by the shifted alignment models") {
    const Genome g{"toy", "", random_bases(200, 125)};
    const unsigned k = 16;
    const auto db = build_db(g, k, Encoding{EncodingKind::OneHot4}, false);
    const std::size_t q = 50;

    for (unsigned p = 0; p < k; ++p) {
        // delete basepair p of the k-mer at offset q, extend from the reference
        std::string read = g.sequence.substr(q, p) + g.sequence.substr(q + p + 1, k - p);
        REQUIRE(read.size() == k);

        // alignment models: source row keeps the prefix, the +1-offset row
        // keeps the suffix
        const unsigned vs_source = bp_mismatches(read, g.sequence.substr(q, k));
        const unsigned vs_shifted = bp_mismatches(read, g.sequence.substr(q + 1, k));
        const unsigned bound = std::min(vs_source, vs_shifted);

        const BitWord query = encode(read, db.encoding);
        const unsigned best_bits = min_distance(db.array, query);
        CHECK(best_bits <= 2 * bound);
    }
}

TEST_CASE("classification is encoding-independent") {
    const Genome g{"toy", "", random_bases(300, 135)};
    const auto onehot_db = build_db(g, 16, Encoding{EncodingKind::OneHot4}, true);
    const auto gray_db = build_db(g, 16, Encoding{EncodingKind::Gray3}, true);
    CHECK(gray_db.array.width() == 48);

    for (std::uint64_t i = 0; i < 15; ++i) {
        const auto read =
            simulate_read(g, (i * 17) % 250, 16, ReadErrorProfile{0.12, 0.01, 0.01}, 13, i);
        for (unsigned thr : {0u, 3u, 8u})
            CHECK(classify_read(read.bases, onehot_db, thr) ==
                  classify_read(read.bases, gray_db, thr));
    }
}

TEST_CASE("classify_exact is the threshold-zero baseline") {
    const Genome g{"toy", "", random_bases(400, 127)};
    const auto db = build_db(g, 64, Encoding{EncodingKind::OneHot4}, true);
    const std::string clean = g.sequence.substr(50, 64);
    CHECK(classify_exact(clean, db));

    std::string one_sub = clean;
    one_sub[10] = one_sub[10] == 'G' ? 'T' : 'G';
    CHECK_FALSE(classify_exact(one_sub, db));
}

TEST_CASE("evaluate aggregates confusion counts per threshold") {
    const Genome g{"toy", "", random_bases(600, 129)};
    const auto db = build_db(g, 32, Encoding{EncodingKind::OneHot4}, true);

    LabeledSample pos{"target", true, {}};
    for (std::uint64_t i = 0; i < 40; ++i)
        pos.reads.push_back(simulate_read(g, (i * 11) % 500, 32, ReadErrorProfile{}, 3, i).bases);
    LabeledSample neg{"unrelated", false, {}};
    for (std::uint64_t i = 0; i < 40; ++i) neg.reads.push_back(random_bases(32, 131, i));

    const auto report = evaluate({pos, neg}, db, {0, 2, 4, 8});
    CHECK(report.matcher == "ideal");
    CHECK(report.read_count == 80);
    REQUIRE(report.per_threshold.size() == 4);

    double prev_sens = 0.0;
    for (const auto& m : report.per_threshold) {
        CHECK(m.counts.tp + m.counts.fn == 40);
        CHECK(m.counts.tn + m.counts.fp == 40);
        REQUIRE(m.sensitivity.has_value());
        REQUIRE(m.specificity.has_value());
        CHECK(*m.sensitivity >= prev_sens);
        prev_sens = *m.sensitivity;
        CHECK(*m.specificity == 1.0);  // random 32-mers stay far from the db
    }

    // error-free reads classify perfectly at every threshold
    LabeledSample clean{"clean", true, {}};
    for (std::uint64_t i = 0; i < 10; ++i)
        clean.reads.push_back(g.sequence.substr(i * 17, 32));
    const auto perfect = evaluate({clean}, db, {0, 4});
    for (const auto& m : perfect.per_threshold) {
        CHECK(*m.sensitivity == 1.0);
        CHECK_FALSE(m.specificity.has_value());  // no expected-negative reads
    }
}

TEST_CASE("analog matcher without variation equals the ideal oracle") {
    const Genome g{"toy", "", random_bases(260, 133)};
    const auto db = build_db(g, 16, Encoding{EncodingKind::OneHot4}, true);

    AnalogMatcher matcher;
    matcher.spec.sigma_g = 0;
    matcher.spec.sigma_t = 0;

    for (std::uint64_t i = 0; i < 12; ++i) {
        const auto read =
            simulate_read(g, (i * 19) % 200, 16, ReadErrorProfile{0.1, 0.01, 0.01}, 8, i);
        for (unsigned thr : {0u, 2u, 5u, 9u})
            CHECK(classify_read(read.bases, db, thr, matcher, i) ==
                  classify_read(read.bases, db, thr));
    }
}

TEST_CASE("evaluate rejects malformed reads with an ordinary exception") {
    const Genome g{"toy", "", random_bases(300, 137)};
    const auto db = build_db(g, 16, Encoding{EncodingKind::OneHot4}, true);
    const LabeledSample short_read{"s", true, {"ACGT"}};
    CHECK_THROWS_AS(evaluate({short_read}, db, {0}), std::invalid_argument);
    const LabeledSample ambiguous{"n", true, {std::string(15, 'A') + "N"}};
    CHECK_THROWS_AS(evaluate({ambiguous}, db, {0}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate({}, db, {}), std::invalid_argument);
}

TEST_CASE("read error profile validation") {
    CHECK_THROWS_AS((ReadErrorProfile{-0.1, 0, 0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((ReadErrorProfile{0.6, 0.3, 0.2}).validate(), std::invalid_argument);
    CHECK_NOTHROW((ReadErrorProfile{1.0, 0, 0}).validate());
    CHECK_NOTHROW(ReadErrorProfile{}.validate());
}
