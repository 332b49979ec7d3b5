#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hdcam/dbfile.hpp"
#include "hdcam/errors.hpp"
#include "hdcam/rng.hpp"

using namespace hdcam;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

Genome random_genome(std::size_t n, std::uint64_t seed) {
    static constexpr char bases[] = "ACGT";
    std::string s(n, 'A');
    CounterRng rng(seed, 66, 0, 0);
    for (auto& c : s) c = bases[rng.next_base()];
    return {"ACC.1", "synthetic", s};
}

} // namespace

TEST_CASE("database round-trip is the identity") {
    for (const auto kind : {EncodingKind::OneHot4, EncodingKind::Gray3}) {
        const auto genome = random_genome(300, 51);
        const auto db = build_db(genome, 16, Encoding{kind}, true);
        const std::string path = temp_path("hdcam_rt.db");
        write_db(path, db);

        const auto back = read_db(path);
        CHECK(back.k == db.k);
        CHECK(back.encoding.kind == db.encoding.kind);
        CHECK(back.deduplicated == db.deduplicated);
        CHECK(back.source_accession == db.source_accession);
        REQUIRE(back.array.row_count() == db.array.row_count());
        REQUIRE(back.array.width() == db.array.width());
        for (std::size_t i = 0; i < db.array.row_count(); ++i)
            CHECK(back.array.row_word(i) == db.array.row_word(i));
        std::remove(path.c_str());
    }
}

TEST_CASE("header bytes follow the documented little-endian layout") {
    const Genome genome{"AB12.3", "x", "ACGTACGTAC"};
    const auto db = build_db(genome, 4, Encoding{EncodingKind::OneHot4}, false);
    REQUIRE(db.array.row_count() == 7);
    const std::string path = temp_path("hdcam_layout.db");
    write_db(path, db);
    const std::string raw = slurp(path);

    REQUIRE(raw.size() == 26 + 2 + 6 + 7 * 2);  // header + accession + 16-bit rows
    CHECK(raw.substr(0, 8) == "HDCAMDB1");
    CHECK(static_cast<unsigned char>(raw[8]) == 1);    // version lo
    CHECK(static_cast<unsigned char>(raw[9]) == 0);    // version hi
    CHECK(static_cast<unsigned char>(raw[10]) == 4);   // k lo
    CHECK(static_cast<unsigned char>(raw[11]) == 0);   // k hi
    CHECK(static_cast<unsigned char>(raw[12]) == 1);   // onehot4
    CHECK(static_cast<unsigned char>(raw[13]) == 0);   // flags: not dedup
    CHECK(static_cast<unsigned char>(raw[14]) == 16);  // word_bits = 4*4, LE u32
    CHECK(static_cast<unsigned char>(raw[15]) == 0);
    CHECK(static_cast<unsigned char>(raw[18]) == 7);   // row_count LE u64
    CHECK(static_cast<unsigned char>(raw[26]) == 6);   // accession length
    CHECK(raw.substr(28, 6) == "AB12.3");
    // row 0 is "ACGT": groups 0001,0010,0100,1000 LSB-first -> bytes 0x21,0x84
    CHECK(static_cast<unsigned char>(raw[34]) == 0x21);
    CHECK(static_cast<unsigned char>(raw[35]) == 0x84);
    std::remove(path.c_str());
}

TEST_CASE("write is byte-stable across repeated calls") {
    const auto db = build_db(random_genome(200, 53), 8, Encoding{}, false);
    const std::string p1 = temp_path("hdcam_a.db");
    const std::string p2 = temp_path("hdcam_b.db");
    write_db(p1, db);
    write_db(p2, db);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("corrupt files fail with distinct messages") {
    const auto db = build_db(random_genome(200, 55), 8, Encoding{}, true);
    const std::string path = temp_path("hdcam_bad.db");
    write_db(path, db);
    const std::string good = slurp(path);

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        spit(path, bad);
        CHECK_THROWS_WITH_AS(read_db(path), doctest::Contains("magic"), db_format_error);
    }
    SUBCASE("version mismatch") {
        std::string bad = good;
        bad[8] = 9;
        spit(path, bad);
        CHECK_THROWS_WITH_AS(read_db(path), doctest::Contains("version"), db_format_error);
    }
    SUBCASE("truncated") {
        spit(path, good.substr(0, good.size() - 3));
        CHECK_THROWS_WITH_AS(read_db(path), doctest::Contains("truncated"), db_format_error);
    }
    SUBCASE("trailing bytes") {
        spit(path, good + "zz");
        CHECK_THROWS_WITH_AS(read_db(path), doctest::Contains("trailing"), db_format_error);
    }
    SUBCASE("header k/encoding inconsistency") {
        std::string bad = good;
        bad[12] = 2;  // claim gray3 while word_bits still says onehot4
        spit(path, bad);
        CHECK_THROWS_WITH_AS(read_db(path), doctest::Contains("word_bits"), db_format_error);
    }
    std::remove(path.c_str());
}

TEST_CASE("missing file is an I/O failure, not a format error") {
    CHECK_THROWS_AS(read_db(temp_path("does_not_exist.db")), std::runtime_error);
}
