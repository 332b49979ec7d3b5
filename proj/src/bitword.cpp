#include "hdcam/bitword.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hdcam {

BitWord::BitWord(std::size_t width_bits)
    : width_(width_bits), words_(words_for(width_bits), 0) {
    if (width_bits == 0) throw std::invalid_argument("BitWord: width must be positive");
}

BitWord::BitWord(std::size_t width_bits, std::span<const std::uint64_t> words)
    : width_(width_bits), words_(words.begin(), words.end()) {
    if (width_bits == 0) throw std::invalid_argument("BitWord: width must be positive");
    if (words.size() != words_for(width_bits))
        throw std::invalid_argument("BitWord: word count does not match width");
    mask_tail();
}

void BitWord::mask_tail() {
    const std::size_t rem = width_ % 64;
    if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

bool BitWord::get(std::size_t bit) const {
    if (bit >= width_) throw std::out_of_range("BitWord: bit index out of range");
    return (words_[bit / 64] >> (bit % 64)) & 1u;
}

void BitWord::set(std::size_t bit, bool value) {
    if (bit >= width_) throw std::out_of_range("BitWord: bit index out of range");
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if (value)
        words_[bit / 64] |= mask;
    else
        words_[bit / 64] &= ~mask;
}

std::vector<std::uint8_t> BitWord::to_bytes() const {
    const std::size_t nbytes = (width_ + 7) / 8;
    std::vector<std::uint8_t> out(nbytes);
    for (std::size_t i = 0; i < nbytes; ++i)
        out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    return out;
}

BitWord BitWord::from_bytes(std::size_t width_bits, std::span<const std::uint8_t> bytes) {
    if (bytes.size() != (width_bits + 7) / 8)
        throw std::invalid_argument("BitWord: byte count does not match width");
    BitWord w(width_bits);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        w.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
    w.mask_tail();
    return w;
}

CamArray::CamArray(std::size_t width_bits, std::size_t rows)
    : width_(width_bits), rows_(rows), stride_(BitWord::words_for(width_bits)),
      data_(stride_ * rows, 0) {
    if (width_bits == 0) throw std::invalid_argument("CamArray: width must be positive");
}

std::span<const std::uint64_t> CamArray::row(std::size_t index) const {
    if (index >= rows_) throw std::out_of_range("CamArray: row index out of range");
    return {data_.data() + index * stride_, stride_};
}

BitWord CamArray::row_word(std::size_t index) const {
    return BitWord(width_, row(index));
}

void CamArray::store(std::size_t index, const BitWord& word) {
    if (index >= rows_) throw std::out_of_range("CamArray: row index out of range");
    if (word.width() != width_)
        throw std::invalid_argument("CamArray: word width does not match array width");
    std::copy(word.words().begin(), word.words().end(), data_.begin() + index * stride_);
}

namespace {

unsigned popcount_xor(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    unsigned d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d += static_cast<unsigned>(std::popcount(a[i] ^ b[i]));
    return d;
}

} // namespace

unsigned hamming_distance(const BitWord& a, const BitWord& b) {
    if (a.width() != b.width())
        throw std::invalid_argument("hamming_distance: width mismatch");
    return popcount_xor(a.words(), b.words());
}

bool oracle_match(const BitWord& a, const BitWord& b, unsigned threshold_bits) {
    return hamming_distance(a, b) <= threshold_bits;
}

unsigned row_distance(const CamArray& array, std::size_t index, const BitWord& query) {
    if (query.width() != array.width())
        throw std::invalid_argument("row_distance: width mismatch");
    return popcount_xor(array.row(index), query.words());
}

std::vector<std::size_t> search_oracle_serial(const CamArray& array, const BitWord& query,
                                              unsigned threshold_bits) {
    if (query.width() != array.width())
        throw std::invalid_argument("search_oracle: width mismatch");
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < array.row_count(); ++i)
        if (popcount_xor(array.row(i), query.words()) <= threshold_bits) hits.push_back(i);
    return hits;
}

std::vector<std::size_t> search_oracle(const CamArray& array, const BitWord& query,
                                       unsigned threshold_bits) {
    if (query.width() != array.width())
        throw std::invalid_argument("search_oracle: width mismatch");
    const std::size_t n = array.row_count();
    // Per-row match flags, then an ordered sweep: result bytes do not depend
    // on the thread count or schedule.
    std::vector<std::uint8_t> hit(n, 0);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        hit[static_cast<std::size_t>(i)] =
            popcount_xor(array.row(static_cast<std::size_t>(i)), query.words()) <= threshold_bits;
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < n; ++i)
        if (hit[i]) hits.push_back(i);
    return hits;
}

unsigned min_distance_serial(const CamArray& array, const BitWord& query) {
    if (array.row_count() == 0)
        throw std::invalid_argument("min_distance: empty array");
    if (query.width() != array.width())
        throw std::invalid_argument("min_distance: width mismatch");
    unsigned best = static_cast<unsigned>(array.width());
    for (std::size_t i = 0; i < array.row_count(); ++i)
        best = std::min(best, popcount_xor(array.row(i), query.words()));
    return best;
}

unsigned min_distance(const CamArray& array, const BitWord& query) {
    if (array.row_count() == 0)
        throw std::invalid_argument("min_distance: empty array");
    if (query.width() != array.width())
        throw std::invalid_argument("min_distance: width mismatch");
    unsigned best = static_cast<unsigned>(array.width());
#pragma omp parallel for schedule(static) reduction(min : best)
    for (long long i = 0; i < static_cast<long long>(array.row_count()); ++i) {
        unsigned d = popcount_xor(array.row(static_cast<std::size_t>(i)), query.words());
        if (d < best) best = d;
    }
    return best;
}

} // namespace hdcam
