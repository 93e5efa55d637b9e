#include "wtree/bytes.hpp"

namespace wtree {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(BytesView data) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw CodecError("hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw CodecError("invalid hex digit");
        }
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u16be(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32be(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put_u64be(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

std::uint8_t ByteReader::u8() {
    if (pos_ + 1 > data_.size()) throw CodecError("input truncated");
    return data_[pos_++];
}

std::uint16_t ByteReader::u16be() {
    if (pos_ + 2 > data_.size()) throw CodecError("input truncated");
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint32_t ByteReader::u32be() {
    if (pos_ + 4 > data_.size()) throw CodecError("input truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64be() {
    if (pos_ + 8 > data_.size()) throw CodecError("input truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 8;
    return v;
}

Bytes ByteReader::bytes(std::size_t len) {
    if (pos_ + len > data_.size()) throw CodecError("input truncated");
    Bytes out(data_.begin() + pos_, data_.begin() + pos_ + len);
    pos_ += len;
    return out;
}

void ByteReader::expect_magic(std::string_view magic) {
    if (pos_ + magic.size() > data_.size()) throw CodecError("input truncated");
    for (char c : magic) {
        if (data_[pos_++] != static_cast<std::uint8_t>(c)) {
            throw CodecError("bad magic");
        }
    }
}

void ByteReader::finish() const {
    if (pos_ != data_.size()) throw CodecError("trailing bytes after payload");
}

}  // namespace wtree
