#pragma once

#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace hdcam {

// Fixed-width bit string packed LSB-first: bit i lives in 64-bit word i/64
// at position i%64, which on little-endian byte output is LSB-first within
// each byte. Bits at positions >= width are always zero.
class BitWord {
public:
    BitWord() = default;
    explicit BitWord(std::size_t width_bits);
    BitWord(std::size_t width_bits, std::span<const std::uint64_t> words);

    std::size_t width() const { return width_; }
    std::size_t word_count() const { return words_.size(); }

    bool get(std::size_t bit) const;
    void set(std::size_t bit, bool value);

    std::span<const std::uint64_t> words() const { return words_; }

    // Packed little-endian bytes, ceil(width/8) of them, LSB-first per byte.
    std::vector<std::uint8_t> to_bytes() const;
    static BitWord from_bytes(std::size_t width_bits, std::span<const std::uint8_t> bytes);

    bool operator==(const BitWord& other) const = default;

    static std::size_t words_for(std::size_t width_bits) { return (width_bits + 63) / 64; }

private:
    void mask_tail();

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

// Row-parallel search structure: n stored words of identical width, kept in
// one contiguous buffer (rows are hot in every search). Row indices are
// stable; store() replaces a row in place.
class CamArray {
public:
    CamArray() = default;
    CamArray(std::size_t width_bits, std::size_t rows);

    std::size_t width() const { return width_; }
    std::size_t row_count() const { return rows_; }
    std::size_t words_per_row() const { return stride_; }

    std::span<const std::uint64_t> row(std::size_t index) const;
    BitWord row_word(std::size_t index) const;

    void store(std::size_t index, const BitWord& word);

private:
    std::size_t width_ = 0;
    std::size_t rows_ = 0;
    std::size_t stride_ = 0;
    std::vector<std::uint64_t> data_;
};

// Number of differing bit positions. Widths must match.
unsigned hamming_distance(const BitWord& a, const BitWord& b);

// Ideal digital reference: true iff hamming_distance(a, b) <= threshold_bits.
bool oracle_match(const BitWord& a, const BitWord& b, unsigned threshold_bits);

// All row indices whose stored word is within threshold_bits of the query,
// ascending. Serial variant is the reference implementation; the default
// runs the row scan under OpenMP and returns identical results.
std::vector<std::size_t> search_oracle(const CamArray& array, const BitWord& query,
                                       unsigned threshold_bits);
std::vector<std::size_t> search_oracle_serial(const CamArray& array, const BitWord& query,
                                              unsigned threshold_bits);

// Distance from query to one stored row.
unsigned row_distance(const CamArray& array, std::size_t index, const BitWord& query);

// Smallest distance from query to any row (array must be non-empty).
unsigned min_distance(const CamArray& array, const BitWord& query);
unsigned min_distance_serial(const CamArray& array, const BitWord& query);

} // namespace hdcam
