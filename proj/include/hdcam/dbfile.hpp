#pragma once

#include <string>

#include "hdcam/genomics.hpp"

namespace hdcam {

// On-disk k-mer database, little-endian throughout:
//
//   offset  size  field
//   0       8     magic "HDCAMDB1"
//   8       2     version (1)
//   10      2     k (basepairs)
//   12      1     encoding kind (1 = onehot4, 2 = gray3)
//   13      1     flags (bit 0: deduplicated)
//   14      4     word_bits (== k * bits per base)
//   18      8     row_count
//   26      2     accession length, followed by that many UTF-8 bytes
//   ...           row_count rows, each word_bits bits packed LSB-first and
//                 padded to a byte boundary
//
// The file length must match the header arithmetic exactly. Offsets are
// provenance, not payload, and are not persisted.
inline constexpr char kDbMagic[8] = {'H', 'D', 'C', 'A', 'M', 'D', 'B', '1'};
inline constexpr std::uint16_t kDbVersion = 1;

void write_db(const std::string& path, const KmerDb& db);
KmerDb read_db(const std::string& path);

} // namespace hdcam
