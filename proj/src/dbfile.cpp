#include "hdcam/dbfile.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hdcam/errors.hpp"

namespace hdcam {

namespace {

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    void bytes(void* out, std::size_t n) {
        if (pos_ + n > size_) throw db_format_error("database file is truncated");
        std::memcpy(out, data_ + pos_, n);
        pos_ += n;
    }
    std::uint16_t u16() {
        std::uint8_t b[2];
        bytes(b, 2);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        bytes(b, 4);
        return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t{b[3]} << 24);
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        std::uint8_t b[8];
        bytes(b, 8);
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::size_t remaining() const { return size_ - pos_; }

private:
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace

void write_db(const std::string& path, const KmerDb& db) {
    std::string out;
    out.append(kDbMagic, sizeof(kDbMagic));
    put_u16(out, kDbVersion);
    put_u16(out, static_cast<std::uint16_t>(db.k));
    out.push_back(static_cast<char>(db.encoding.kind));
    out.push_back(static_cast<char>(db.deduplicated ? 1 : 0));
    put_u32(out, static_cast<std::uint32_t>(db.array.width()));
    put_u64(out, db.array.row_count());
    if (db.source_accession.size() > 0xFFFF)
        throw db_format_error("accession string too long for the database header");
    put_u16(out, static_cast<std::uint16_t>(db.source_accession.size()));
    out.append(db.source_accession);

    for (std::size_t i = 0; i < db.array.row_count(); ++i) {
        const auto bytes = db.array.row_word(i).to_bytes();
        out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }

    // Write-to-temp plus rename so a failed write never leaves a torn file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f.write(out.data(), static_cast<std::streamsize>(out.size()));
        if (!f) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

KmerDb read_db(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
    Reader r(raw.data(), raw.size());

    char magic[8];
    r.bytes(magic, sizeof(magic));
    if (std::memcmp(magic, kDbMagic, sizeof(kDbMagic)) != 0)
        throw db_format_error("bad magic: not an HDCAM database file");
    const std::uint16_t version = r.u16();
    if (version != kDbVersion)
        throw db_format_error("unsupported database version " + std::to_string(version));

    KmerDb db;
    db.k = r.u16();
    const std::uint8_t enc = [&] {
        std::uint8_t v;
        r.bytes(&v, 1);
        return v;
    }();
    if (enc != 1 && enc != 2)
        throw db_format_error("unknown encoding kind " + std::to_string(enc));
    db.encoding.kind = static_cast<EncodingKind>(enc);
    std::uint8_t flags;
    r.bytes(&flags, 1);
    db.deduplicated = (flags & 1) != 0;
    const std::uint32_t word_bits = r.u32();
    if (word_bits != db.k * db.encoding.bits_per_base())
        throw db_format_error("word_bits does not match k and encoding");
    const std::uint64_t rows = r.u64();
    const std::uint16_t acc_len = r.u16();
    db.source_accession.resize(acc_len);
    r.bytes(db.source_accession.data(), acc_len);

    const std::size_t row_bytes = (word_bits + 7) / 8;
    if (r.remaining() != rows * row_bytes)
        throw db_format_error(r.remaining() < rows * row_bytes
                                  ? "database file is truncated"
                                  : "database file has trailing bytes");

    db.array = CamArray(word_bits, rows);
    std::vector<std::uint8_t> buf(row_bytes);
    for (std::uint64_t i = 0; i < rows; ++i) {
        r.bytes(buf.data(), row_bytes);
        db.array.store(i, BitWord::from_bytes(word_bits, buf));
    }
    return db;
}

} // namespace hdcam
